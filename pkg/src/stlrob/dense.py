"""Dense-time robustness over piecewise-constant signals.

A :class:`StepSignal` stores the value *at* every breakpoint and the value on
the open span *between* consecutive breakpoints.  Input signals are
right-continuous, but until and since can produce jumps closed on the left,
so the representation keeps both.  Evaluation works on integer time (the
trace and interval bounds are scaled by a common factor) and every operator
is a single left-to-right sweep with monotone two-pointer windows.
"""
from __future__ import annotations

import bisect
import math
from collections import deque
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from . import ast as A
from .core import (INF, NonMonotoneTime, Specification, StlError, Trace, TraceError,
                   as_time)
from .predicates import Classic
from .rewrite import min_lookahead, temporal_depth
from .windows import UNTIL_IDENTITY, SlidingUntil, until_combine


class DenseUnsupportedOperator(StlError):
    pass


class StepSignal:
    """Piecewise-constant extended-real signal on ``[times[0], times[-1]]``.

    ``at[i]`` is the value at ``times[i]``; ``between[i]`` the value on the
    open span ``(times[i], times[i+1])``.  An empty signal has no times.
    """

    __slots__ = ("times", "at", "between")

    def __init__(self, times, at, between):
        self.times = list(times)
        self.at = [float(x) for x in at]
        self.between = [float(x) for x in between]
        if len(self.at) != len(self.times) or len(self.between) != max(len(self.times) - 1, 0):
            raise ValueError("inconsistent step signal lengths")
        for a, b in zip(self.times, self.times[1:]):
            if b <= a:
                raise ValueError("step signal breakpoints must strictly increase")

    @classmethod
    def empty(cls) -> "StepSignal":
        return cls([], [], [])

    @classmethod
    def constant(cls, lo, hi, value: float) -> "StepSignal":
        if lo == hi:
            return cls([lo], [value], [])
        return cls([lo, hi], [value, value], [value])

    @classmethod
    def from_samples(cls, samples, end=None) -> "StepSignal":
        """Right-continuous signal holding each sample until the next one."""
        times = [s.time if hasattr(s, "time") else s[0] for s in samples]
        vals = [s.value if hasattr(s, "value") else s[1] for s in samples]
        if end is not None and end > times[-1]:
            times.append(end)
            vals.append(vals[-1])
        return cls(times, vals, vals[:-1])

    def __len__(self) -> int:
        return len(self.times)

    def __bool__(self) -> bool:
        return bool(self.times)

    def __eq__(self, other) -> bool:
        return (isinstance(other, StepSignal) and self.times == other.times
                and self.at == other.at and self.between == other.between)

    def __repr__(self) -> str:
        return f"StepSignal({self.rows()!r})"

    @property
    def start(self):
        return self.times[0]

    @property
    def end(self):
        return self.times[-1]

    def value_at(self, t) -> float:
        i = bisect.bisect_left(self.times, t)
        if i < len(self.times) and self.times[i] == t:
            return self.at[i]
        if i == 0 or i == len(self.times):
            raise ValueError(f"t={t} outside signal domain")
        return self.between[i - 1]

    def rows(self) -> list:
        """``(t, value)`` per breakpoint, plus ``(t, span value)`` when the span differs."""
        out = []
        for i, t in enumerate(self.times):
            out.append((t, self.at[i]))
            if i < len(self.between) and self.between[i] != self.at[i]:
                out.append((t, self.between[i]))
        return out

    def canonical(self) -> "StepSignal":
        """Drop interior breakpoints where the signal does not change."""
        if len(self.times) <= 2:
            return StepSignal(self.times, self.at, self.between)
        times, at, between = [self.times[0]], [self.at[0]], []
        span = self.between[0]
        for i in range(1, len(self.times) - 1):
            if self.at[i] == span and self.between[i] == span:
                continue
            between.append(span)
            times.append(self.times[i])
            at.append(self.at[i])
            span = self.between[i]
        between.append(span)
        times.append(self.times[-1])
        at.append(self.at[-1])
        return StepSignal(times, at, between)

    def map_times(self, fn) -> "StepSignal":
        return StepSignal([fn(t) for t in self.times], self.at, self.between)

    def negate(self) -> "StepSignal":
        return StepSignal(self.times, [-x for x in self.at], [-x for x in self.between])

    def reflect(self) -> "StepSignal":
        """``t -> -t``: mirror image on ``[-end, -start]``."""
        return StepSignal([-t for t in reversed(self.times)], self.at[::-1], self.between[::-1])

    def restrict(self, lo, hi) -> "StepSignal":
        if not self.times or hi < lo or hi < self.start or lo > self.end:
            return StepSignal.empty()
        lo, hi = max(lo, self.start), min(hi, self.end)
        grid = sorted({lo, hi} | {t for t in self.times if lo < t < hi})
        return self.resample(grid)

    def resample(self, grid) -> "StepSignal":
        """Values on a sorted grid that contains every breakpoint in its range."""
        at, between = [], []
        times = self.times
        j = 0
        for k, t in enumerate(grid):
            while j < len(times) and times[j] < t:
                j += 1
            if j < len(times) and times[j] == t:
                at.append(self.at[j])
                span_idx = j
            else:
                at.append(self.between[j - 1])
                span_idx = j - 1
            if k + 1 < len(grid):
                between.append(self.between[span_idx])
        return StepSignal(grid, at, between)


def _merge(*sigs):
    grid = sorted(set().union(*(s.times for s in sigs)))
    return grid, [s.resample(grid) for s in sigs]


def _half(x, y):
    s = x + y
    if isinstance(s, int):
        return s // 2 if s % 2 == 0 else Fraction(s, 2)
    return s / 2


def _locations(grid):
    """Breakpoints interleaved with span midpoints."""
    out = []
    for i, t in enumerate(grid):
        out.append(t)
        if i + 1 < len(grid):
            out.append(_half(t, grid[i + 1]))
    return out


def _from_locations(grid, vals) -> StepSignal:
    return StepSignal(grid, vals[0::2], vals[1::2]).canonical()


def _candidates(times, shifts, lo, hi):
    out = {lo, hi}
    for d in shifts:
        if d == INF or d == -INF:
            continue
        for t in times:
            c = t - d
            if lo <= c <= hi:
                out.add(c)
    return sorted(out)


# ---------------------------------------------------------------- atoms
# Atom 2i is the breakpoint times[i]; atom 2i+1 the open span after it.

def _left_out(times, j, bound, strict):
    """Is atom ``j`` entirely left of a window starting at ``bound``?"""
    if j % 2 == 0:
        s = times[j // 2]
        return s < bound if strict else s <= bound
    return times[j // 2 + 1] <= bound


def _right_in(times, j, bound, closed):
    """Does atom ``j`` start early enough to meet a window ending at ``bound``?"""
    if j % 2 == 0:
        s = times[j // 2]
        return s <= bound if closed else s < bound
    return times[j // 2] < bound


class _AtomWindow:
    """Two-pointer view of the atoms meeting a monotonically moving window."""

    def __init__(self, times, left_closed=True, right_closed=True):
        self.times = times
        self.n = 2 * len(times) - 1
        self.head = 0
        self.tail = 0
        self.left_closed = left_closed
        self.right_closed = right_closed

    def advance(self, lo, hi, on_push, on_expire):
        times, n = self.times, self.n
        while self.tail < n and _right_in(times, self.tail, hi, self.right_closed):
            on_push(self.tail)
            self.tail += 1
        while self.head < n and _left_out(times, self.head, lo, self.left_closed):
            self.head += 1
        on_expire(self.head)


def _atom_value(sig, j):
    return sig.at[j // 2] if j % 2 == 0 else sig.between[j // 2]


def _sliding_extremum(sig: StepSignal, lo, hi, is_max: bool, dom) -> StepSignal:
    """``out(t) = max/min of sig over [t+lo, t+hi] ∩ dom``."""
    d0, d1 = dom
    grid = _candidates(sig.times, (lo, hi), d0, d1)
    identity = -INF if is_max else INF
    win = _AtomWindow(sig.times)
    dq = deque()

    def push(j):
        v = _atom_value(sig, j)
        if is_max:
            while dq and dq[-1][1] <= v:
                dq.pop()
        else:
            while dq and dq[-1][1] >= v:
                dq.pop()
        dq.append((j, v))

    def expire(head):
        while dq and dq[0][0] < head:
            dq.popleft()

    vals = []
    for t in _locations(grid):
        a, b = max(t + lo, d0), min(t + hi, d1)
        if a > b:
            vals.append(identity)
            continue
        win.advance(a, b, push, expire)
        vals.append(dq[0][1] if dq else identity)
    return _from_locations(grid, vals)


def window_extremum(s: StepSignal, width, kind: str = "min") -> StepSignal:
    """``out(t)`` = min or max of ``s`` over ``[t, t + width]`` within its domain."""
    if not s:
        return StepSignal.empty()
    if width < 0:
        raise ValueError("window width must be non-negative")
    scale, sig = _to_int(s, [width])
    w = width * scale if width != INF else INF
    out = _sliding_extremum(sig, 0, w, kind == "max", (sig.start, sig.end))
    return out.map_times(lambda t: Fraction(t, scale))


def _to_int(s: StepSignal, bounds):
    dens = [Fraction(t).denominator for t in s.times]
    dens += [Fraction(b).denominator for b in bounds if b != INF]
    scale = 2 * math.lcm(*dens)
    return scale, s.map_times(lambda t: int(Fraction(t) * scale))


def _until_like(s1: StepSignal, s2: StepSignal, lo, hi, pre, dom) -> StepSignal:
    """``out(t) = sup over t' in [t+lo, t+hi] of min(s2(t'), inf s1 on [t+pre, t'))``.

    Windows are intersected with ``dom``; ``pre <= lo``.  Until is
    ``(lo, hi, pre) = (a, b, 0)`` and precedes ``(a-b, 0, -b)``.
    """
    d0, d1 = dom
    grid0, (x1, x2) = _merge(s1, s2)
    times = grid0
    grid = _candidates(times, (lo, hi, pre), d0, d1)

    # inf of s1 over the half-open prefix [t+pre, alpha)
    pre_win = _AtomWindow(times, left_closed=True, right_closed=False)
    pre_dq = deque()

    def pre_push(j):
        v = _atom_value(x1, j)
        while pre_dq and pre_dq[-1][1] >= v:
            pre_dq.pop()
        pre_dq.append((j, v))

    def pre_expire(head):
        while pre_dq and pre_dq[0][0] < head:
            pre_dq.popleft()

    # until summaries of the atoms strictly inside (alpha, beta)
    mid_win = _AtomWindow(times, left_closed=False, right_closed=False)
    agg = SlidingUntil(2 * len(times))

    def mid_push(j):
        v1, v2 = _atom_value(x1, j), _atom_value(x2, j)
        agg.push(j, (v2, v1) if j % 2 == 0 else ((v2 if v2 <= v1 else v1), v1))

    def mid_expire(head):
        agg.expire(head)

    vals = []
    for t in _locations(grid):
        alpha, beta = max(t + lo, d0), min(t + hi, d1)
        if alpha > beta:
            vals.append(-INF)
            continue
        start = max(t + pre, d0)
        if start < alpha:
            pre_win.advance(start, alpha, pre_push, pre_expire)
            prefix = pre_dq[0][1] if pre_dq else INF
        else:
            prefix = INF
        first = (x2.value_at(alpha), x1.value_at(alpha))
        if alpha == beta:
            best = first[0]
        else:
            mid_win.advance(alpha, beta, mid_push, mid_expire)
            last = (x2.value_at(beta), x1.value_at(beta))
            best = until_combine(until_combine(first, agg.query() if len(agg) else UNTIL_IDENTITY),
                                 last)[0]
        vals.append(best if best <= prefix else prefix)
    return _from_locations(grid, vals)


# ---------------------------------------------------------------- evaluation

def _pointwise(fn, *sigs) -> StepSignal:
    grid, parts = _merge(*sigs)
    at = fn(*(np.asarray(p.at) for p in parts))
    between = fn(*(np.asarray(p.between) for p in parts))
    return StepSignal(grid, np.asarray(at, float).tolist(),
                      np.asarray(between, float).tolist()).canonical()


def _domain(trace: Trace, names):
    if not names:
        names = trace.names
    if not names:
        raise TraceError("trace has no variables")
    trace.require(names)
    d0 = max(trace[n][0].time for n in names)
    d1 = min(trace[n][-1].time for n in names)
    if d1 < d0:
        raise TraceError(f"variable domains do not overlap ({d0} > {d1})")
    return d0, d1


def _check_dense(formula):
    for node in A.walk(formula):
        if isinstance(node, A.STEP_OPS):
            raise DenseUnsupportedOperator(
                f"{type(node).__name__} is only meaningful in discrete time")


def _input_signals(trace: Trace, names, d0, d1, scale):
    out = {}
    for n in names:
        samples = trace[n]
        ts = [s.time for s in samples]
        k = bisect.bisect_right(ts, d0) - 1
        pts = [(d0, samples[k].value)] + [(s.time, s.value) for s in samples[k + 1:]
                                         if d0 < s.time <= d1]
        sig = StepSignal.from_samples(pts, end=d1)
        out[n] = sig.map_times(lambda t: int(t * scale))
    return out


def robustness_signal(formula: A.Node, inputs: Mapping[str, StepSignal], dom, strategy,
                      scale=1):
    """Robustness of ``formula`` as a StepSignal over ``dom``.

    Signals and ``dom`` are in units ``1/scale`` of formula time.
    """
    d0, d1 = dom
    memo = {}

    def ev(f):
        key = id(f)
        if key not in memo:
            memo[key] = _ev(f)
        return memo[key]

    def _ev(f):
        if isinstance(f, A.Predicate):
            names = sorted(A.variables(f))
            fn = strategy.compile(f)
            if not names:
                v = float(fn({}))
                return StepSignal.constant(d0, d1, v)
            return _pointwise(lambda *cols: np.broadcast_to(
                fn(dict(zip(names, cols))), cols[0].shape), *(inputs[n] for n in names))
        if isinstance(f, A.BoolConst):
            return StepSignal.constant(d0, d1, INF if f.value else -INF)
        if isinstance(f, A.Not):
            return ev(f.arg).negate()
        if isinstance(f, A.And):
            return _pointwise(np.minimum, ev(f.left), ev(f.right))
        if isinstance(f, A.Or):
            return _pointwise(np.maximum, ev(f.left), ev(f.right))
        if isinstance(f, A.Implies):
            return _pointwise(lambda x, y: np.maximum(-x, y), ev(f.left), ev(f.right))
        iv = f.interval
        a = int(iv.lo * scale)
        b = int(iv.hi * scale) if iv.bounded else INF
        if isinstance(f, (A.Eventually, A.Always)):
            return _sliding_extremum(ev(f.arg), a, b, isinstance(f, A.Eventually), dom)
        if isinstance(f, (A.Once, A.Historically)):
            return _sliding_extremum(ev(f.arg), -b, -a, isinstance(f, A.Once), dom)
        if isinstance(f, A.Until):
            return _until_like(ev(f.left), ev(f.right), a, b, 0, dom)
        if isinstance(f, A.Since):
            out = _until_like(ev(f.left).reflect(), ev(f.right).reflect(), a, b, 0, (-d1, -d0))
            return out.reflect()
        if isinstance(f, A.Precedes):
            return _until_like(ev(f.left), ev(f.right), a - b, 0, -b, dom)
        raise DenseUnsupportedOperator(f"unknown node {type(f).__name__}")

    return ev(formula)


def _strategy(spec, semantics):
    if semantics is None:
        return Classic()
    if not isinstance(semantics, str):
        return semantics
    from .predicates import strategy_for
    return strategy_for(spec, semantics)


def _scale_for(trace, names, formula, extra=()):
    dens = [s.time.denominator for n in names for s in trace[n]]
    for iv_node in A.walk(formula):
        if isinstance(iv_node, A.UNARY_TEMPORAL + A.BINARY_TEMPORAL):
            dens.append(iv_node.interval.lo.denominator)
            if iv_node.interval.bounded:
                dens.append(iv_node.interval.hi.denominator)
    dens += [Fraction(x).denominator for x in extra]
    return 2 * math.lcm(*dens) if dens else 2


def evaluate_dense(spec, trace: Trace, semantics=None) -> StepSignal:
    """Robustness StepSignal over ``[D0, D1 - H]``.

    ``[D0, D1]`` is the intersection of the variables' sample ranges: the
    latest first timestamp to the earliest last timestamp.  ``H`` is the
    formula's temporal depth, or its minimal lookahead when unbounded.
    """
    if not isinstance(spec, Specification):
        spec = Specification.from_formula(spec)
    formula = spec.formula
    _check_dense(formula)
    names = sorted(A.variables(formula))
    d0, d1 = _domain(trace, names)
    horizon = temporal_depth(formula)
    if horizon == INF:
        horizon = min_lookahead(formula)
    if d1 - horizon < d0:
        return StepSignal.empty()
    return _evaluate(formula, trace, names, d0, d1, d1 - horizon, _strategy(spec, semantics))


def _evaluate(formula, trace, names, d0, d1, stop, strategy) -> StepSignal:
    scale = _scale_for(trace, names, formula, (d0, d1, stop))
    inputs = _input_signals(trace, names, d0, d1, scale)
    out = robustness_signal(formula, inputs, (int(d0 * scale), int(d1 * scale)), strategy,
                            scale)
    out = out.restrict(int(d0 * scale), int(stop * scale))
    return out.map_times(lambda t: Fraction(t, scale))


# ---------------------------------------------------------------- online

class DenseMonitor:
    """Online dense-time monitor by re-evaluation of the received prefix.

    Output rows (see :meth:`StepSignal.rows`) are emitted once final: every
    breakpoint strictly before ``F - H``, where ``F`` is the earliest last
    timestamp across variables.  :meth:`finish` flushes the rest, so the
    concatenation of all emissions equals ``evaluate_dense(...).rows()``.
    """

    def __init__(self, spec, semantics=None):
        if not isinstance(spec, Specification):
            spec = Specification.from_formula(spec)
        self.spec = spec
        formula = spec.formula
        _check_dense(formula)
        self.horizon = temporal_depth(formula)
        if self.horizon == INF:
            raise DenseUnsupportedOperator("online dense monitoring needs bounded future intervals")
        self.strategy = _strategy(spec, semantics)
        self.names = sorted(A.variables(formula))
        self.samples = {n: [] for n in self.names}
        self.done = None  # last emitted breakpoint
        self.finished = False

    def _ingest(self, samples: Mapping[str, Iterable]):
        for name, items in samples.items():
            if name not in self.samples:
                if name in self.spec.declarations:
                    continue
                from .core import UnknownVariable
                raise UnknownVariable(f"variable {name!r} not declared")
            buf = self.samples[name]
            for item in items:
                t, v = item if not hasattr(item, "time") else (item.time, item.value)
                t = as_time(t)
                if buf and t <= buf[-1][0]:
                    raise NonMonotoneTime(
                        f"sample for {name!r} at {t} does not follow {buf[-1][0]}")
                v = float(v)
                if not math.isfinite(v):
                    raise TraceError(f"non-finite value for {name!r} at t={t}")
                buf.append((t, v))

    def _trace(self) -> Trace:
        return Trace(self.samples)

    def _emit(self, sig: StepSignal, upto, inclusive: bool):
        out = []
        for i, t in enumerate(sig.times):
            if self.done is not None and t <= self.done:
                continue
            if t > upto or (t == upto and not inclusive):
                break
            out.append((t, sig.at[i]))
            if i < len(sig.between) and sig.between[i] != sig.at[i]:
                out.append((t, sig.between[i]))
            self.done = t
        return out

    def update(self, samples: Mapping[str, Iterable]) -> list:
        """Add samples (``name -> [(t, v), ...]``); return newly final rows."""
        if self.finished:
            raise StlError("monitor already finished")
        self._ingest(samples)
        if not self.names or any(not self.samples[n] for n in self.names):
            return []
        frontier = min(self.samples[n][-1][0] for n in self.names)
        d0 = max(self.samples[n][0][0] for n in self.names)
        stop = frontier - self.horizon
        if stop < d0:
            return []
        sig = _evaluate(self.spec.formula, self._trace(), self.names, d0, frontier, stop,
                        self.strategy)
        return self._emit(sig, stop, inclusive=False)

    def finish(self) -> list:
        """Evaluate the complete trace and return every row not yet emitted."""
        self.finished = True
        if not self.names or any(not self.samples[n] for n in self.names):
            return []
        sig = evaluate_dense(self.spec, self._trace(), self.strategy)
        if not sig:
            return []
        return self._emit(sig, sig.end, inclusive=True)


def make_dense_monitor(spec, semantics=None) -> DenseMonitor:
    return DenseMonitor(spec, semantics)


def update_dense(state: DenseMonitor, samples: Mapping[str, Iterable]) -> list:
    return state.update(samples)
