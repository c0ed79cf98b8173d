"""Brute-force reference semantics used only by the test-suite.

Everything here is a literal double loop over candidate time points, kept
independent from the engines (its own term evaluator, no shared windows).
"""
from __future__ import annotations

import math
from fractions import Fraction

from stlrob import ast as A
from stlrob.core import INF, OutOfDomain

# ---------------------------------------------------------------- terms

def term_value(t, env):
    if isinstance(t, A.Var):
        return env[t.name]
    if isinstance(t, A.Const):
        return t.value
    if isinstance(t, A.Neg):
        return -term_value(t.arg, env)
    if isinstance(t, A.Abs):
        return abs(term_value(t.arg, env))
    l, r = term_value(t.left, env), term_value(t.right, env)
    if t.op == "+":
        return l + r
    if t.op == "-":
        return l - r
    if t.op == "*":
        return l * r
    return l / r


def classic_margin(p, env):
    l, r = term_value(p.lhs, env), term_value(p.rhs, env)
    if p.op in (">", ">="):
        return l - r
    if p.op in ("<", "<="):
        return r - l
    if p.op == "==":
        return -abs(l - r)
    return abs(l - r)


def relative_margin(measured, fixed):
    measured, fixed = set(measured), set(fixed)

    def margin(p, env):
        ys = A.variables(p)
        m = classic_margin(p, env)
        if not ys <= measured | fixed:
            return 0.0
        if not ys <= fixed:
            return m
        return INF if m > 0 else -INF
    return margin


def _sup(vals):
    return max(vals, default=-INF)


def _inf(vals):
    return min(vals, default=INF)

# ---------------------------------------------------------------- discrete


class DiscreteOracle:
    """Robustness at sample index ``t`` straight from the sup/inf definitions."""

    def __init__(self, trace, period=1, margin=classic_margin):
        self.trace = trace
        self.names = list(trace.names)
        self.n = len(trace[self.names[0]]) if self.names else 0
        self.period = Fraction(period)
        self.margin = margin
        self.memo = {}

    def ticks(self, x):
        q = Fraction(x) / self.period
        assert q.denominator == 1
        return int(q)

    def window(self, t, iv, future):
        a = self.ticks(iv.lo)
        b = self.ticks(iv.hi) if iv.bounded else self.n
        if future:
            lo, hi = t + a, t + b
        else:
            lo, hi = t - b, t - a
        return range(max(lo, 0), min(hi, self.n - 1) + 1)

    def rho(self, f, t):
        if not 0 <= t < self.n:
            raise OutOfDomain(t)
        key = (f, t)
        if key not in self.memo:
            self.memo[key] = self._rho(f, t)
        return self.memo[key]

    def _rho(self, f, t):
        r = self.rho
        if isinstance(f, A.Predicate):
            env = {v: self.trace[v][t].value for v in A.variables(f)}
            return self.margin(f, env)
        if isinstance(f, A.BoolConst):
            return INF if f.value else -INF
        if isinstance(f, A.Not):
            return -r(f.arg, t)
        if isinstance(f, A.And):
            return min(r(f.left, t), r(f.right, t))
        if isinstance(f, A.Or):
            return max(r(f.left, t), r(f.right, t))
        if isinstance(f, A.Implies):
            return max(-r(f.left, t), r(f.right, t))
        if isinstance(f, A.Eventually):
            return _sup(r(f.arg, s) for s in self.window(t, f.interval, True))
        if isinstance(f, A.Always):
            return _inf(r(f.arg, s) for s in self.window(t, f.interval, True))
        if isinstance(f, A.Once):
            return _sup(r(f.arg, s) for s in self.window(t, f.interval, False))
        if isinstance(f, A.Historically):
            return _inf(r(f.arg, s) for s in self.window(t, f.interval, False))
        if isinstance(f, A.Next):
            return r(f.arg, t + 1) if t + 1 < self.n else -INF
        if isinstance(f, A.Previous):
            return r(f.arg, t - 1) if t >= 1 else -INF
        if isinstance(f, A.Rise):
            prev = -r(f.arg, t - 1) if t >= 1 else -INF
            return min(prev, r(f.arg, t))
        if isinstance(f, A.Fall):
            prev = r(f.arg, t - 1) if t >= 1 else -INF
            return min(prev, -r(f.arg, t))
        if isinstance(f, A.Until):
            best = -INF
            for s in self.window(t, f.interval, True):
                inner = _inf(r(f.left, u) for u in range(t, s))
                best = max(best, min(r(f.right, s), inner))
            return best
        if isinstance(f, A.Since):
            best = -INF
            for s in self.window(t, f.interval, False):
                inner = _inf(r(f.left, u) for u in range(s + 1, t + 1))
                best = max(best, min(r(f.right, s), inner))
            return best
        if isinstance(f, A.Precedes):
            a, b = self.ticks(f.interval.lo), self.ticks(f.interval.hi)
            best = -INF
            for s in range(max(t - b + a, 0), t + 1):
                inner = _inf(r(f.left, u) for u in range(max(t - b, 0), s))
                best = max(best, min(r(f.right, s), inner))
            return best
        raise TypeError(f)

    def series(self, f):
        return [self.rho(f, t) for t in range(self.n)]


def oracle_robustness(f, trace, t, period=1, margin=classic_margin):
    return DiscreteOracle(trace, period, margin).rho(f, t)


def oracle_boolean(f, trace, t, period=1):
    """Qualitative satisfaction with strict ``> 0`` atoms."""
    o = DiscreteOracle(trace, period)

    def sat(g, s):
        if isinstance(g, A.Predicate):
            env = {v: trace[v][s].value for v in A.variables(g)}
            return classic_margin(g, env) > 0
        if isinstance(g, A.BoolConst):
            return g.value
        if isinstance(g, A.Not):
            return not sat(g.arg, s)
        if isinstance(g, A.And):
            return sat(g.left, s) and sat(g.right, s)
        if isinstance(g, A.Or):
            return sat(g.left, s) or sat(g.right, s)
        if isinstance(g, A.Implies):
            return (not sat(g.left, s)) or sat(g.right, s)
        if isinstance(g, A.Eventually):
            return any(sat(g.arg, u) for u in o.window(s, g.interval, True))
        if isinstance(g, A.Always):
            return all(sat(g.arg, u) for u in o.window(s, g.interval, True))
        if isinstance(g, A.Once):
            return any(sat(g.arg, u) for u in o.window(s, g.interval, False))
        if isinstance(g, A.Historically):
            return all(sat(g.arg, u) for u in o.window(s, g.interval, False))
        if isinstance(g, A.Until):
            return any(sat(g.right, u) and all(sat(g.left, v) for v in range(s, u))
                       for u in o.window(s, g.interval, True))
        if isinstance(g, A.Since):
            return any(sat(g.right, u) and all(sat(g.left, v) for v in range(u + 1, s + 1))
                       for u in o.window(s, g.interval, False))
        if isinstance(g, A.Precedes):
            a, b = o.ticks(g.interval.lo), o.ticks(g.interval.hi)
            return any(sat(g.right, u) and all(sat(g.left, v) for v in range(max(s - b, 0), u))
                       for u in range(max(s - b + a, 0), s + 1))
        if isinstance(g, A.Next):
            return s + 1 < o.n and sat(g.arg, s + 1)
        if isinstance(g, A.Previous):
            return s >= 1 and sat(g.arg, s - 1)
        if isinstance(g, A.Rise):
            return s >= 1 and not sat(g.arg, s - 1) and sat(g.arg, s)
        if isinstance(g, A.Fall):
            return s >= 1 and sat(g.arg, s - 1) and not sat(g.arg, s)
        raise TypeError(g)

    return sat(f, t)

# ---------------------------------------------------------------- dense


class DenseOracle:
    """Dense-time robustness of piecewise-constant signals at any rational ``t``.

    Every sup/inf ranges over the window's endpoints, the candidate breakpoints
    inside it and the midpoints between consecutive candidates, which covers
    each constant piece of a finitely-variable integrand.
    """

    def __init__(self, trace, margin=classic_margin, names=None):
        self.trace = trace
        self.names = list(names if names is not None else trace.names)
        self.d0 = max(trace[n][0].time for n in self.names)
        self.d1 = min(trace[n][-1].time for n in self.names)
        self.margin = margin
        self.memo = {}
        self.kmemo = {}

    def value(self, name, t):
        out = None
        for s in self.trace[name]:
            if s.time <= t:
                out = s.value
            else:
                break
        return out

    def clip(self, ts):
        return {t for t in ts if self.d0 <= t <= self.d1} | {self.d0, self.d1}

    def K(self, f):
        key = f
        if key in self.kmemo:
            return self.kmemo[key]
        if isinstance(f, A.Predicate):
            ks = {s.time for v in A.variables(f) for s in self.trace[v]}
        elif isinstance(f, A.BoolConst):
            ks = set()
        elif isinstance(f, (A.Not, A.And, A.Or, A.Implies)):
            ks = set().union(*(self.K(c) for c in A.formula_children(f)))
        else:
            base = set().union(*(self.K(c) for c in A.formula_children(f)))
            a, b = f.interval.lo, f.interval.hi
            ks = set(base)
            if isinstance(f, (A.Eventually, A.Always, A.Until)):
                ks |= {k - a for k in base}
                if f.interval.bounded:
                    ks |= {k - b for k in base}
            elif isinstance(f, (A.Once, A.Historically, A.Since)):
                ks |= {k + a for k in base}
                if f.interval.bounded:
                    ks |= {k + b for k in base}
            elif isinstance(f, A.Precedes):
                ks |= {k + (b - a) for k in base} | {k + b for k in base}
            else:
                raise TypeError(f)
        ks = self.clip(ks)
        self.kmemo[key] = ks
        return ks

    def _points(self, lo, hi, K, lo_closed=True, hi_closed=True):
        """Representative points of ``lo..hi`` (with the given end closedness)."""
        if lo > hi or (lo == hi and not (lo_closed and hi_closed)):
            return []
        inner = sorted(k for k in K if lo < k < hi)
        pts = [lo] + inner + ([hi] if hi != lo else [])
        out = []
        for i, p in enumerate(pts):
            if (p != lo or lo_closed) and (p != hi or hi_closed):
                out.append(p)
            if i + 1 < len(pts):
                out.append((p + pts[i + 1]) / 2)
        return out

    def rho(self, f, t):
        t = Fraction(t)
        if not self.d0 <= t <= self.d1:
            raise OutOfDomain(t)
        key = (f, t)
        if key not in self.memo:
            self.memo[key] = self._rho(f, t)
        return self.memo[key]

    def _win(self, lo, hi):
        return max(lo, self.d0), min(hi, self.d1)

    def _rho(self, f, t):
        r = self.rho
        if isinstance(f, A.Predicate):
            env = {v: self.value(v, t) for v in A.variables(f)}
            return self.margin(f, env)
        if isinstance(f, A.BoolConst):
            return INF if f.value else -INF
        if isinstance(f, A.Not):
            return -r(f.arg, t)
        if isinstance(f, A.And):
            return min(r(f.left, t), r(f.right, t))
        if isinstance(f, A.Or):
            return max(r(f.left, t), r(f.right, t))
        if isinstance(f, A.Implies):
            return max(-r(f.left, t), r(f.right, t))
        if isinstance(f, (A.Next, A.Previous, A.Rise, A.Fall)):
            raise TypeError("step operators have no dense meaning")
        a = f.interval.lo
        b = f.interval.hi if f.interval.bounded else self.d1 - self.d0 + 1
        if isinstance(f, (A.Eventually, A.Always, A.Once, A.Historically)):
            if isinstance(f, (A.Eventually, A.Always)):
                lo, hi = self._win(t + a, t + b)
            else:
                lo, hi = self._win(t - b, t - a)
            vals = [r(f.arg, s) for s in self._points(lo, hi, self.K(f.arg))]
            return _sup(vals) if isinstance(f, (A.Eventually, A.Once)) else _inf(vals)
        K = self.K(f.left) | self.K(f.right)
        K1 = self.K(f.left)
        best = -INF
        if isinstance(f, A.Until):
            lo, hi = self._win(t + a, t + b)
            for s in self._points(lo, hi, K):
                inner = _inf(r(f.left, u) for u in self._points(t, s, K1, True, False))
                best = max(best, min(r(f.right, s), inner))
            return best
        if isinstance(f, A.Since):
            lo, hi = self._win(t - b, t - a)
            for s in self._points(lo, hi, K):
                inner = _inf(r(f.left, u) for u in self._points(s, t, K1, False, True))
                best = max(best, min(r(f.right, s), inner))
            return best
        if isinstance(f, A.Precedes):
            lo, hi = self._win(t - b + a, t)
            start = max(t - b, self.d0)
            for s in self._points(lo, hi, K):
                inner = _inf(r(f.left, u) for u in self._points(start, s, K1, True, False))
                best = max(best, min(r(f.right, s), inner))
            return best
        raise TypeError(f)


def is_close(x, y, tol=1e-9):
    if math.isinf(x) or math.isinf(y):
        return x == y
    return abs(x - y) <= tol


def dense_mismatches(f, trace, sig, margin=classic_margin):
    """Points where ``sig`` differs from the dense oracle.

    Checks every breakpoint of either side inside the signal's domain and
    the midpoint between consecutive ones.
    """
    if not sig:
        return []
    o = DenseOracle(trace, margin, names=sorted(A.variables(f)) or None)
    pts = sorted(set(sig.times) | {k for k in o.K(f) if sig.start <= k <= sig.end})
    probes = list(pts) + [(a + b) / 2 for a, b in zip(pts, pts[1:])]
    return [(t, sig.value_at(t), o.rho(f, t)) for t in probes
            if not is_close(sig.value_at(t), o.rho(f, t))]
