"""CSV traces in, CSV robustness out."""
from __future__ import annotations

import csv
import io
import math
from fractions import Fraction
from typing import Iterable, TextIO

from .core import INF, Trace, TraceError, as_time, format_time


def read_trace(src: TextIO, allow_gaps: bool = False) -> Trace:
    """Read ``time,<var>,...`` rows.

    Empty cells mean "no sample at this time" and are only accepted with
    ``allow_gaps`` (dense mode).
    """
    reader = csv.reader(src)
    try:
        header = next(reader)
    except StopIteration:
        raise TraceError("trace file is empty") from None
    header = [h.strip() for h in header]
    if not header or header[0] != "time":
        raise TraceError("trace header must start with 'time'")
    names = header[1:]
    if len(set(names)) != len(names):
        raise TraceError("duplicate column in trace header")
    cols = {n: [] for n in names}
    rows = 0
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise TraceError(f"line {lineno}: expected {len(header)} fields, got {len(row)}")
        try:
            t = as_time(row[0])
        except (ValueError, ZeroDivisionError):
            raise TraceError(f"line {lineno}: bad timestamp {row[0]!r}") from None
        for name, cell in zip(names, row[1:]):
            cell = cell.strip()
            if not cell:
                if not allow_gaps:
                    raise TraceError(f"line {lineno}: empty cell for {name!r}")
                continue
            try:
                cols[name].append((t, float(cell)))
            except ValueError:
                raise TraceError(f"line {lineno}: bad value {cell!r} for {name!r}") from None
        rows += 1
    if not rows:
        raise TraceError("trace has no samples")
    return Trace(cols)


def read_trace_text(text: str, allow_gaps: bool = False) -> Trace:
    return read_trace(io.StringIO(text), allow_gaps)


def format_value(v: float) -> str:
    if v == INF:
        return "inf"
    if v == -INF:
        return "-inf"
    if math.isnan(v):
        raise ValueError("NaN robustness")
    return repr(float(v) + 0.0)  # folds -0.0 into 0.0


def parse_value(s: str) -> float:
    return float(s)


def format_row(t: Fraction, v: float) -> str:
    return f"{format_time(t)},{format_value(v)}"


def write_rows(dst: TextIO, rows: Iterable) -> None:
    dst.write("time,robustness\n")
    for t, v in rows:
        dst.write(format_row(t, v) + "\n")


def read_rows(src: TextIO) -> list:
    reader = csv.reader(src)
    next(reader)
    return [(as_time(t), parse_value(v)) for t, v in reader]
