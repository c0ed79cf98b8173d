"""Command line front end: ``stlrob eval | monitor | bench | lint``.

Exit codes: 0 success, 2 specification error, 3 trace error.
"""
from __future__ import annotations

import argparse
import csv
import sys
from fractions import Fraction

from . import ast as A
from .core import UNITS, Specification, StlError, TraceError, as_time, format_time
from .csvio import format_row, read_trace, write_rows
from .parser import format_formula, parse_specification
from .rewrite import pastify, temporal_depth

EXIT_OK, EXIT_SPEC, EXIT_TRACE = 0, 2, 3

SEMANTICS = {"classic": None, "out-rob": "out-rob", "in-vac": "in-vac"}


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load_spec(path: str) -> Specification:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise CliError(EXIT_SPEC, f"cannot read specification: {e}") from None
    try:
        return parse_specification(text)
    except StlError as e:
        raise CliError(EXIT_SPEC, f"{path}: {e}") from None


def _code_for(err: Exception) -> int:
    return EXIT_TRACE if isinstance(err, TraceError) else EXIT_SPEC


def evaluate_rows(spec: Specification, trace, time_mode: str, semantics=None) -> list:
    """Robustness rows exactly as ``eval`` writes them."""
    if time_mode == "discrete":
        from .discrete import evaluate_discrete
        return evaluate_discrete(spec, trace, semantics).as_pairs()
    from .dense import evaluate_dense
    return evaluate_dense(spec, trace, semantics).rows()


def cmd_eval(args) -> int:
    spec = _load_spec(args.spec)
    try:
        with open(args.trace, encoding="utf-8", newline="") as fh:
            trace = read_trace(fh, allow_gaps=args.time == "dense")
    except OSError as e:
        raise CliError(EXIT_TRACE, f"cannot read trace: {e}") from None
    except TraceError as e:
        raise CliError(EXIT_TRACE, f"{args.trace}: {e}") from None
    try:
        rows = evaluate_rows(spec, trace, args.time, SEMANTICS[args.semantics])
    except StlError as e:
        raise CliError(_code_for(e), str(e)) from None
    if args.out and args.out != "-":
        with open(args.out, "w", encoding="utf-8") as fh:
            write_rows(fh, rows)
    else:
        write_rows(sys.stdout, rows)
    return EXIT_OK


def parse_record(line: str, lineno: int):
    """``time,var=value,...`` -> (time, {var: value})."""
    parts = [p.strip() for p in line.split(",")]
    try:
        t = as_time(parts[0])
    except (ValueError, ZeroDivisionError):
        raise CliError(EXIT_TRACE, f"line {lineno}: bad timestamp {parts[0]!r}") from None
    values = {}
    for p in parts[1:]:
        if not p:
            continue
        name, sep, val = p.partition("=")
        if not sep:
            raise CliError(EXIT_TRACE, f"line {lineno}: expected var=value, got {p!r}")
        try:
            values[name.strip()] = float(val)
        except ValueError:
            raise CliError(EXIT_TRACE, f"line {lineno}: bad value {val!r}") from None
    return t, values


def _records(stream):
    for lineno, raw in enumerate(stream, start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, parse_record(line, lineno)


def _prepare_online(spec: Specification, args, out_err):
    formula = spec.formula
    fut = A.first_future(formula)
    if fut is not None and not args.pastify:
        raise CliError(EXIT_SPEC, f"future operator {type(fut).__name__} in specification; "
                                  "rerun with --pastify")
    if args.pastify:
        try:
            period = _period(spec, args) if args.time == "discrete" else Fraction(1)
            shift = temporal_depth(formula, period)
            formula = pastify(formula, period)
        except StlError as e:
            raise CliError(EXIT_SPEC, str(e)) from None
        print(f"pastified: {format_formula(formula)}", file=out_err)
        print(f"horizon shift: {format_time(Fraction(shift))}", file=out_err)
    return Specification(spec.name, spec.declarations, formula, spec.target,
                         spec.period, spec.unit)


def _period(spec: Specification, args) -> Fraction:
    if args.period is not None:
        p = as_time(args.period)
        if args.unit and spec.unit and args.unit != spec.unit:
            p = p * UNITS[args.unit] / UNITS[spec.unit]
        return p
    return spec.period if spec.period is not None else Fraction(1)


def cmd_monitor(args, stdin=None, stdout=None, stderr=None) -> int:
    stdin, stdout, stderr = stdin or sys.stdin, stdout or sys.stdout, stderr or sys.stderr
    spec = _prepare_online(_load_spec(args.spec), args, stderr)
    semantics = SEMANTICS[args.semantics]
    try:
        if args.time == "discrete":
            _monitor_discrete(spec, args, semantics, stdin, stdout)
        else:
            _monitor_dense(spec, semantics, stdin, stdout)
    except StlError as e:
        raise CliError(_code_for(e), str(e)) from None
    return EXIT_OK


def _monitor_discrete(spec, args, semantics, stdin, stdout):
    from .discrete import DiscreteMonitor
    period = _period(spec, args)
    mon = DiscreteMonitor(spec, semantics, period)
    first = None
    stdout.write("time,robustness\n")
    for lineno, (t, values) in _records(stdin):
        if first is None:
            first = t
            if first % period:
                raise CliError(EXIT_TRACE, f"line {lineno}: time {t} is not a multiple "
                                           f"of the period {period}")
        expected = first + mon.index * period
        if t != expected:
            raise CliError(EXIT_TRACE, f"line {lineno}: expected time {format_time(expected)}, "
                                       f"got {format_time(t)}")
        v = mon.update(values)
        stdout.write(format_row(t, v) + "\n")
        stdout.flush()


def _monitor_dense(spec, semantics, stdin, stdout):
    from .dense import DenseMonitor
    mon = DenseMonitor(spec, semantics)
    stdout.write("time,robustness\n")
    for _, (t, values) in _records(stdin):
        rows = mon.update({k: [(t, v)] for k, v in values.items()})
        for r in rows:
            stdout.write(format_row(*r) + "\n")
        stdout.flush()
    for r in mon.finish():
        stdout.write(format_row(*r) + "\n")


def _int_list(text: str):
    return tuple(int(float(x)) for x in text.split(",") if x)


def cmd_bench(args) -> int:
    from .bench import COLUMNS, BenchConfig, run_suite
    cfg = BenchConfig()
    if args.sizes:
        cfg.sizes = _int_list(args.sizes)
    if args.reps is not None:
        cfg.reps = args.reps
    if args.windows:
        cfg.windows = _int_list(args.windows)
    if args.samples is not None:
        cfg.window_samples = args.samples
    if args.modes:
        cfg.modes = tuple(args.modes.split(","))
    rows = run_suite(args.suite, cfg)
    fh = open(args.out, "w", newline="", encoding="utf-8") if args.out and args.out != "-" \
        else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in rows:
            w.writerow(list(r[:5]) + [f"{r[5]:.9g}"])
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def cmd_lint(args) -> int:
    spec = _load_spec(args.spec)
    f = spec.formula
    print(f"name: {spec.name}")
    for var, role in spec.declarations.items():
        print(f"{role}: {var}")
    print(f"formula: {format_formula(f)}")
    depth = temporal_depth(f)
    print(f"temporal depth: {'inf' if depth == float('inf') else format_time(depth)}")
    if A.has_past(f) and A.has_future(f):
        print("fragment: mixed past/future (offline only)")
    elif A.has_future(f):
        try:
            print(f"pastified: {format_formula(pastify(f))}")
        except StlError as e:
            print(f"not pastifiable: {e}")
    else:
        print("fragment: past-only (online ready)")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stlrob", description="STL robustness monitoring")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="evaluate a trace offline")
    e.add_argument("--spec", required=True)
    e.add_argument("--trace", required=True)
    e.add_argument("--time", choices=("discrete", "dense"), default="discrete")
    e.add_argument("--semantics", choices=tuple(SEMANTICS), default="classic")
    e.add_argument("--out", default="-")
    e.set_defaults(func=cmd_eval)

    m = sub.add_parser("monitor", help="monitor time,var=value records from stdin")
    m.add_argument("--spec", required=True)
    m.add_argument("--time", choices=("discrete", "dense"), default="discrete")
    m.add_argument("--period")
    m.add_argument("--unit", choices=tuple(UNITS))
    m.add_argument("--semantics", choices=tuple(SEMANTICS), default="classic")
    m.add_argument("--pastify", action="store_true")
    m.set_defaults(func=cmd_monitor)

    b = sub.add_parser("bench", help="run a scaling benchmark")
    b.add_argument("--suite", choices=("formula-scaling", "window-scaling"), required=True)
    b.add_argument("--out", default="-")
    b.add_argument("--sizes", help="comma-separated trace lengths")
    b.add_argument("--reps", type=int)
    b.add_argument("--windows", help="comma-separated window bounds k")
    b.add_argument("--samples", type=int, help="trace length for window-scaling")
    b.add_argument("--modes", help="comma-separated subset of discrete,dense")
    b.set_defaults(func=cmd_bench)

    lint = sub.add_parser("lint", help="check a specification and show derived forms")
    lint.add_argument("--spec", required=True)
    lint.set_defaults(func=cmd_lint)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
