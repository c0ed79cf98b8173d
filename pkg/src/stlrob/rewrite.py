"""Formula transformations: normalization, desugaring, depth and pastification."""
from __future__ import annotations

from fractions import Fraction

from . import ast as A
from .core import INF, Interval, StlError


class RewriteError(StlError):
    pass


class UnboundedHorizon(RewriteError):
    pass


class PastInsideFuture(RewriteError):
    pass


class UnsupportedPastification(RewriteError):
    pass


def _sub(t, c):
    if isinstance(c, A.Const) and c.value == 0:
        return t
    return A.BinOp("-", t, c)


def normalize(f: A.Node) -> A.Node:
    """Rewrite every comparison to ``term > 0`` and implications to disjunctions.

    Strict and non-strict comparisons collapse to the same robustness.
    ``==`` becomes ``-|l - r| > 0`` and ``!=`` becomes ``|l - r| > 0``.
    """
    if isinstance(f, A.Predicate):
        l, op, r = f.lhs, f.op, f.rhs
        zero = A.Const(0.0)
        if op in (">", ">="):
            return A.Predicate(_sub(l, r), ">", zero)
        if op in ("<", "<="):
            return A.Predicate(_sub(r, l), ">", zero)
        if op == "==":
            return A.Predicate(A.Neg(A.Abs(_sub(l, r))), ">", zero)
        if op == "!=":
            return A.Predicate(A.Abs(_sub(l, r)), ">", zero)
        raise ValueError(f"unknown comparison {op!r}")
    if isinstance(f, A.BoolConst):
        return f
    if isinstance(f, A.Implies):
        return A.Or(A.Not(normalize(f.left)), normalize(f.right))
    return A.rebuild(f, *(normalize(c) for c in A.formula_children(f)))


def desugar(f: A.Node) -> A.Node:
    """Reduce derived operators to predicates, not/or/and, U, S, P, X and Y.

    Next and previous stay primitive: with the ``[t, t')`` inner window of
    until, ``false U phi`` collapses to ``phi`` rather than a one-step shift.
    """
    if isinstance(f, (A.Predicate, A.BoolConst)):
        return f
    if isinstance(f, A.Implies):
        return A.Or(A.Not(desugar(f.left)), desugar(f.right))
    if isinstance(f, A.Eventually):
        return A.Until(A.TRUE, desugar(f.arg), f.interval)
    if isinstance(f, A.Always):
        return A.Not(A.Until(A.TRUE, A.Not(desugar(f.arg)), f.interval))
    if isinstance(f, A.Once):
        return A.Since(A.TRUE, desugar(f.arg), f.interval)
    if isinstance(f, A.Historically):
        return A.Not(A.Since(A.TRUE, A.Not(desugar(f.arg)), f.interval))
    if isinstance(f, A.Rise):
        g = desugar(f.arg)
        return A.And(A.Previous(A.Not(g)), g)
    if isinstance(f, A.Fall):
        g = desugar(f.arg)
        return A.And(A.Previous(g), A.Not(g))
    return A.rebuild(f, *(desugar(c) for c in A.formula_children(f)))


def temporal_depth(f: A.Node, period=1):
    """Future horizon of ``f`` in time units; ``inf`` if any future bound is open.

    Next adds one ``period``; past operators add nothing themselves.
    """
    if isinstance(f, (A.Predicate, A.BoolConst)):
        return Fraction(0)
    kids = [temporal_depth(c, period) for c in A.formula_children(f)]
    inner = max(kids)
    if isinstance(f, A.Next):
        return inner + Fraction(period)
    if isinstance(f, (A.Eventually, A.Always, A.Until)):
        return f.interval.hi + inner if f.interval.bounded and inner != INF else INF
    return inner


def min_lookahead(f: A.Node, period=1):
    """Smallest future reach that keeps every future window non-empty.

    Used to trim output near the end of a finite trace: a future window
    ``[t+a, t+b]`` meets the domain as long as ``t + a`` does.
    """
    if isinstance(f, (A.Predicate, A.BoolConst)):
        return Fraction(0)
    inner = max(min_lookahead(c, period) for c in A.formula_children(f))
    if isinstance(f, A.Next):
        return inner + Fraction(period)
    if isinstance(f, (A.Eventually, A.Always, A.Until)):
        return f.interval.lo + inner
    return inner


def intervals(f: A.Node):
    for n in A.walk(f):
        if isinstance(n, A.UNARY_TEMPORAL + A.BINARY_TEMPORAL):
            yield n.interval


def pastify(f: A.Node, period=1) -> A.Node:
    """Translate a bounded-future formula into a past-only one.

    The result evaluated at ``t + temporal_depth(f)`` equals ``f`` evaluated at
    ``t``.  Comparisons and implications are kept as written.
    """
    depth = temporal_depth(f, period)
    if depth == INF:
        raise UnboundedHorizon("formula has an unbounded future interval")
    _reject_past(f, under_future=False)
    return _pastify(f, depth, Fraction(period))


def _reject_past(f: A.Node, under_future: bool) -> None:
    if isinstance(f, A.PAST_OPS):
        if under_future:
            raise PastInsideFuture(f"past operator {type(f).__name__} under a future operator")
        raise UnsupportedPastification(
            f"past operator {type(f).__name__} in pastification input")
    fut = under_future or isinstance(f, A.FUTURE_OPS)
    for c in A.formula_children(f):
        _reject_past(c, fut)


def _once(arg: A.Node, lo, hi) -> A.Node:
    if hi == 0:
        return arg
    return A.Once(arg, Interval(lo, hi))


def _pastify(f: A.Node, d: Fraction, period: Fraction) -> A.Node:
    if isinstance(f, A.Predicate):
        return _once(f, d, d)
    if isinstance(f, A.BoolConst):
        return f
    if isinstance(f, (A.Not, A.And, A.Or, A.Implies)):
        return A.rebuild(f, *(_pastify(c, d, period) for c in A.formula_children(f)))
    if isinstance(f, A.Next):
        return _pastify(f.arg, d - period, period)
    a, b = (f.interval.lo, f.interval.hi) if hasattr(f, "interval") else (None, None)
    if isinstance(f, A.Eventually):
        return _once(_pastify(f.arg, d - b, period), 0, b - a)
    if isinstance(f, A.Always):
        inner = _pastify(f.arg, d - b, period)
        return inner if b == a else A.Historically(inner, Interval(0, b - a))
    if isinstance(f, A.Until):
        return A.Precedes(_pastify(f.left, d - b, period),
                          _pastify(f.right, d - b, period), Interval(a, b))
    raise UnsupportedPastification(f"cannot pastify {type(f).__name__}")
