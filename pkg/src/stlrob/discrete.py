"""Discrete-time robustness: offline over a full trace, online per sample.

Past operators are computed by streaming operators that keep bounded state.
Offline, a future operator is the same streaming operator run over the
reversed trace: until at ``t`` on ``w`` equals since at ``n - t`` on the
reversal of ``w``, and likewise eventually/once, always/historically and
next/previous.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping

import numpy as np

from . import ast as A
from .core import (INF, MissingVariable, NonUniformTrace, RobustnessSeries,
                   Specification, StlError, Trace, TraceError)
from .predicates import Classic
from .rewrite import intervals, min_lookahead
from .windows import MISSING, DelayLine, MonotonicWindow, SlidingUntil


class MisalignedInterval(StlError):
    pass


class FutureOperatorPresent(StlError):
    pass


# ---------------------------------------------------------------- streaming operators

class WindowOp:
    """Running max (once) or min (historically) over ``[t-b, t-a]``."""

    def __init__(self, a: int, b, kind: str):
        self.a, self.b = a, b
        self.is_max = kind == "max"
        self.delay = DelayLine(a)
        self.window = MonotonicWindow(b - a + 1, kind) if b is not None else None
        self.acc = -INF if self.is_max else INF
        self.t = 0

    def buffers(self):
        out = [self.delay]
        if self.window is not None:
            out.append(self.window)
        return out

    def step(self, x: float) -> float:
        t = self.t
        self.t += 1
        d = self.delay.push(x)
        if self.window is None:
            if d is not MISSING:
                if self.is_max:
                    if d > self.acc:
                        self.acc = d
                elif d < self.acc:
                    self.acc = d
            return self.acc
        self.window.expire(t - self.b)
        if d is not MISSING:
            self.window.push(t - self.a, d)
        return self.window.front()


class SinceOp:
    """``left S[a,b] right`` with inner infimum over ``(t', t]``."""

    def __init__(self, a: int, b):
        self.a, self.b = a, b
        self.left_min = MonotonicWindow(a, "min") if a > 0 else None
        if b is None:
            self.u = -INF
            self.delay = DelayLine(a)
            self.window = None
        else:
            self.delay = DelayLine(a)
            self.window = MonotonicWindow(b - a + 1, "max")
        self.t = 0

    def buffers(self):
        out = [self.delay]
        if self.left_min is not None:
            out.append(self.left_min)
        if self.window is not None:
            out.append(self.window)
        return out

    def step(self, x1: float, x2: float) -> float:
        t = self.t
        self.t += 1
        a = self.a
        if self.left_min is not None:
            self.left_min.expire(t - a + 1)
            self.left_min.push(t, x1)
            recent = self.left_min.front()
        else:
            recent = INF
        if self.window is None:
            # untimed since: u(t) = max(right(t), min(left(t), u(t-1)))
            m = x1 if x1 <= self.u else self.u
            self.u = x2 if x2 >= m else m
            d = self.delay.push(self.u)
            if d is MISSING:
                return -INF
            return d if d <= recent else recent
        self.window.cap_values(x1)
        d = self.delay.push(x2)
        self.window.expire(t - self.b)
        if d is not MISSING:
            self.window.push(t - a, d if d <= recent else recent)
        return self.window.front()


class PrecedesOp:
    """``left P[a,b] right``: sup over ``t'`` in ``[T-b+a, T]`` of
    ``min(right(t'), inf left over [T-b, t'))``."""

    def __init__(self, a: int, b: int):
        self.a, self.b = a, b
        w = b - a
        self.w = w
        self.agg = SlidingUntil(w + 1)
        if a > 0:
            self.delay = DelayLine(w + 1)
            self.head_min = MonotonicWindow(a, "min")
        else:
            self.delay = None
            self.head_min = None
        self.t = 0

    def buffers(self):
        out = [self.agg]
        if self.delay is not None:
            out += [self.delay, self.head_min]
        return out

    def step(self, x1: float, x2: float) -> float:
        t = self.t
        self.t += 1
        self.agg.expire(t - self.w)
        self.agg.push(t, (x2, x1))
        q = self.agg.query()[0]
        if self.delay is None:
            return q
        d = self.delay.push(x1)
        self.head_min.expire(t - self.b)
        if d is not MISSING:
            self.head_min.push(t - self.w - 1, d)
        h = self.head_min.front()
        return q if q <= h else h


class PrevOp:
    def __init__(self):
        self.prev = -INF

    def buffers(self):
        return []

    def step(self, x: float) -> float:
        out = self.prev
        self.prev = x
        return out


# ---------------------------------------------------------------- compilation

def _ticks(value, period: Fraction, what: str) -> int:
    q = Fraction(value) / period
    if q.denominator != 1:
        raise MisalignedInterval(f"{what} {value} is not a multiple of the period {period}")
    return int(q)


def _bounds(iv, period):
    a = _ticks(iv.lo, period, "interval bound")
    b = _ticks(iv.hi, period, "interval bound") if iv.bounded else None
    return a, b


def check_alignment(formula: A.Node, period: Fraction) -> None:
    for iv in intervals(formula):
        _bounds(iv, period)


def _first_future(f):
    n = A.first_future(f)
    return type(n).__name__ if n is not None else None


class _Compiled:
    """A formula tree turned into nested stateful step closures."""

    def __init__(self, formula: A.Node, period: Fraction, strategy):
        self.ops = []
        self.strategy = strategy
        self.period = period
        self.root = self._build(formula)

    def _build(self, f):
        S = self.strategy
        if isinstance(f, A.Predicate):
            return S.compile(f)
        if isinstance(f, A.BoolConst):
            v = INF if f.value else -INF
            return lambda env: v
        if isinstance(f, A.Not):
            g = self._build(f.arg)
            return lambda env: -g(env)
        if isinstance(f, (A.And, A.Or, A.Implies)):
            l, r = self._build(f.left), self._build(f.right)
            if isinstance(f, A.And):
                return lambda env: min(l(env), r(env))
            if isinstance(f, A.Or):
                return lambda env: max(l(env), r(env))
            return lambda env: max(-l(env), r(env))
        if isinstance(f, (A.Once, A.Historically)):
            a, b = _bounds(f.interval, self.period)
            op = WindowOp(a, b, "max" if isinstance(f, A.Once) else "min")
            self.ops.append(op)
            g = self._build(f.arg)
            return lambda env: op.step(g(env))
        if isinstance(f, A.Since):
            a, b = _bounds(f.interval, self.period)
            op = SinceOp(a, b)
            self.ops.append(op)
            l, r = self._build(f.left), self._build(f.right)
            return lambda env: op.step(l(env), r(env))
        if isinstance(f, A.Precedes):
            a, b = _bounds(f.interval, self.period)
            op = PrecedesOp(a, b)
            self.ops.append(op)
            l, r = self._build(f.left), self._build(f.right)
            return lambda env: op.step(l(env), r(env))
        if isinstance(f, A.Previous):
            op = PrevOp()
            g = self._build(f.arg)
            return lambda env: op.step(g(env))
        if isinstance(f, A.Rise):
            op = PrevOp()
            g = self._build(f.arg)

            def rise(env):
                x = g(env)
                y = op.step(-x)
                return y if y <= x else x
            return rise
        if isinstance(f, A.Fall):
            op = PrevOp()
            g = self._build(f.arg)

            def fall(env):
                x = g(env)
                y = op.step(x)
                return y if y <= -x else -x
            return fall
        raise FutureOperatorPresent(f"future operator {type(f).__name__} in online formula")


class DiscreteMonitor:
    """Online discrete-time monitor for a past-only formula.

    Each :meth:`update` consumes one sample of every formula variable and
    returns the robustness at that sample index given the prefix so far.
    State is allocated up front and stays fixed for the monitor's lifetime.
    """

    def __init__(self, spec, semantics=None, period=None):
        if not isinstance(spec, Specification):
            spec = Specification.from_formula(spec)
        self.spec = spec
        formula = spec.formula
        fut = _first_future(formula)
        if fut is not None:
            raise FutureOperatorPresent(
                f"future operator {fut} present; pastify the formula first")
        self.period = Fraction(period if period is not None else (spec.period or 1))
        check_alignment(formula, self.period)
        self.strategy = semantics if semantics is not None and not isinstance(semantics, str) \
            else _strategy(spec, semantics)
        self.variables = sorted(A.variables(formula))
        self._compiled = _Compiled(formula, self.period, self.strategy)
        self.index = 0

    def update(self, values: Mapping[str, float] = None, **kw) -> float:
        env = dict(values or {}, **kw)
        for v in self.variables:
            if v not in env:
                raise MissingVariable(f"no value for {v!r} at index {self.index}")
        for v in self.variables:
            env[v] = float(env[v])
        out = self._compiled.root(env)
        self.index += 1
        return out

    @property
    def time(self) -> Fraction:
        return self.index * self.period

    def buffers(self):
        out = []
        for op in self._compiled.ops:
            out.extend(op.buffers())
        return out

    def state_size(self) -> int:
        """Total preallocated slots across all window buffers."""
        return sum(b.capacity for b in self.buffers())


def make_online_monitor(spec, semantics=None, period=None) -> DiscreteMonitor:
    return DiscreteMonitor(spec, semantics, period)


def _strategy(spec, semantics):
    if semantics is None:
        return Classic()
    from .predicates import strategy_for
    return strategy_for(spec, semantics)


# ---------------------------------------------------------------- offline

def uniform_axis(trace: Trace, names, period=None):
    """Shared sample times of ``names`` and the sampling period.

    Every variable must carry identical timestamps spaced exactly ``period``
    apart (or uniformly, when ``period`` is not given).
    """
    names = list(names)
    if not names:
        names = trace.names
    if not names:
        raise TraceError("trace has no variables")
    trace.require(names)
    times = [s.time for s in trace[names[0]]]
    for n in names[1:]:
        other = [s.time for s in trace[n]]
        if other != times:
            raise NonUniformTrace(f"variables {names[0]!r} and {n!r} are sampled at different times")
    if len(times) >= 2:
        step = times[1] - times[0]
        for k, (t0, t1) in enumerate(zip(times, times[1:])):
            if t1 - t0 != step:
                raise NonUniformTrace(f"non-uniform spacing at sample {k + 1} ({t0} -> {t1})")
        if period is not None and Fraction(period) != step:
            raise NonUniformTrace(f"sample spacing {step} differs from the period {period}")
    else:
        step = None
    period = Fraction(period) if period is not None else (step if step is not None else Fraction(1))
    if times[0] % period != 0:
        raise NonUniformTrace(f"first timestamp {times[0]} is not a multiple of the period {period}")
    return times, period


def _arrays(trace: Trace, names, n):
    return {name: np.fromiter((s.value for s in trace[name]), dtype=float, count=n)
            for name in names}


def _stream(op_factory, cols, reverse: bool):
    if reverse:
        cols = [c[::-1] for c in cols]
    op = op_factory()
    step = op.step
    if len(cols) == 1:
        out = [step(x) for x in cols[0].tolist()]
    else:
        out = [step(x, y) for x, y in zip(cols[0].tolist(), cols[1].tolist())]
    res = np.asarray(out, dtype=float)
    return res[::-1] if reverse else res


def _naive_window(x, a, b, kind):
    agg, empty = (max, -INF) if kind == "max" else (min, INF)
    out = np.empty(len(x))
    for t in range(len(x)):
        lo = 0 if b is None else max(t - b, 0)
        out[t] = agg(x[lo:t - a + 1].tolist(), default=empty) if t - a >= 0 else empty
    return out


def _naive_since(x1, x2, a, b):
    out = np.empty(len(x1))
    for t in range(len(x1)):
        lo = 0 if b is None else max(t - b, 0)
        out[t] = max((min(x2[s], min(x1[s + 1:t + 1].tolist(), default=INF))
                      for s in range(lo, t - a + 1)), default=-INF)
    return out


def _naive_precedes(x1, x2, a, b):
    out = np.empty(len(x1))
    for t in range(len(x1)):
        head = max(t - b, 0)
        out[t] = max((min(x2[s], min(x1[head:s].tolist(), default=INF))
                      for s in range(max(t - b + a, 0), t + 1)), default=-INF)
    return out


def _reversed(fn, *cols):
    return fn(*[c[::-1] for c in cols])[::-1]


def robustness_arrays(formula: A.Node, env, n: int, period: Fraction, strategy,
                      naive: bool = False):
    """Robustness of ``formula`` at every sample index, as a float array.

    ``naive`` replaces the streaming window operators with direct double
    loops; quadratic in the window width and meant only for debugging.
    """

    def ev(f):
        if isinstance(f, A.Predicate):
            v = strategy.compile(f)(env)
            return np.broadcast_to(np.asarray(v, dtype=float), (n,)).copy()
        if isinstance(f, A.BoolConst):
            return np.full(n, INF if f.value else -INF)
        if isinstance(f, A.Not):
            return -ev(f.arg)
        if isinstance(f, A.And):
            return np.minimum(ev(f.left), ev(f.right))
        if isinstance(f, A.Or):
            return np.maximum(ev(f.left), ev(f.right))
        if isinstance(f, A.Implies):
            return np.maximum(-ev(f.left), ev(f.right))
        if isinstance(f, (A.Once, A.Historically, A.Eventually, A.Always)):
            a, b = _bounds(f.interval, period)
            kind = "max" if isinstance(f, (A.Once, A.Eventually)) else "min"
            rev = isinstance(f, (A.Eventually, A.Always))
            if naive:
                fn = lambda x: _naive_window(x, a, b, kind)
                return _reversed(fn, ev(f.arg)) if rev else fn(ev(f.arg))
            return _stream(lambda: WindowOp(a, b, kind), [ev(f.arg)], rev)
        if isinstance(f, (A.Since, A.Until)):
            a, b = _bounds(f.interval, period)
            rev = isinstance(f, A.Until)
            if naive:
                fn = lambda x1, x2: _naive_since(x1, x2, a, b)
                return _reversed(fn, ev(f.left), ev(f.right)) if rev \
                    else fn(ev(f.left), ev(f.right))
            return _stream(lambda: SinceOp(a, b), [ev(f.left), ev(f.right)], rev)
        if isinstance(f, A.Precedes):
            a, b = _bounds(f.interval, period)
            if naive:
                return _naive_precedes(ev(f.left), ev(f.right), a, b)
            return _stream(lambda: PrecedesOp(a, b), [ev(f.left), ev(f.right)], False)
        if isinstance(f, (A.Previous, A.Next)):
            return _stream(PrevOp, [ev(f.arg)], isinstance(f, A.Next))
        if isinstance(f, A.Rise):
            x = ev(f.arg)
            return np.minimum(_stream(PrevOp, [-x], False), x)
        if isinstance(f, A.Fall):
            x = ev(f.arg)
            return np.minimum(_stream(PrevOp, [x], False), -x)
        raise TypeError(f"unknown node {f!r}")

    return ev(formula)


def evaluate_discrete(spec, trace: Trace, semantics=None, period=None,
                      naive: bool = False) -> RobustnessSeries:
    """Robustness at every sample index whose outermost future window is non-empty."""
    if not isinstance(spec, Specification):
        spec = Specification.from_formula(spec)
    formula = spec.formula
    names = sorted(A.variables(formula))
    times, period = uniform_axis(trace, names, period if period is not None else spec.period)
    check_alignment(formula, period)
    strategy = semantics if semantics is not None and not isinstance(semantics, str) \
        else _strategy(spec, semantics)
    n = len(times)
    env = _arrays(trace, names, n)
    values = robustness_arrays(formula, env, n, period, strategy, naive)
    keep = n - _ticks(min_lookahead(formula, period), period, "lookahead")
    keep = max(keep, 0)
    return RobustnessSeries(times[:keep], values[:keep].tolist())
