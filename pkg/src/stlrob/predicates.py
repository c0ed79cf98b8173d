"""Term compilation and predicate evaluation strategies.

Engines never compute predicate robustness directly; they ask a strategy.
The classical strategy returns the signed margin, the relative one implements
input/output aware robustness by re-scoring that margin.
"""
from __future__ import annotations

import operator
from typing import Callable

from . import ast as A
from .core import INF, StlError


class OverlappingSets(StlError):
    pass


_BINOPS = {"+": operator.add, "-": operator.sub, "*": operator.mul, "/": operator.truediv}


def compile_term(t: A.Node) -> Callable:
    """Return ``env -> value``; works on floats and on numpy arrays alike."""
    if isinstance(t, A.Var):
        name = t.name
        return lambda env: env[name]
    if isinstance(t, A.Const):
        v = t.value
        return lambda env: v
    if isinstance(t, A.Neg):
        f = compile_term(t.arg)
        return lambda env: -f(env)
    if isinstance(t, A.Abs):
        f = compile_term(t.arg)
        return lambda env: abs(f(env))
    if isinstance(t, A.BinOp):
        fl, fr, op = compile_term(t.left), compile_term(t.right), _BINOPS[t.op]
        return lambda env: op(fl(env), fr(env))
    raise TypeError(f"not a term: {t!r}")


def compile_margin(p: A.Predicate) -> Callable:
    """Signed distance of ``p``: positive exactly when the comparison holds strictly."""
    lhs, rhs = compile_term(p.lhs), compile_term(p.rhs)
    op = p.op
    if op in (">", ">="):
        return lambda env: lhs(env) - rhs(env)
    if op in ("<", "<="):
        return lambda env: rhs(env) - lhs(env)
    if op == "==":
        return lambda env: -abs(lhs(env) - rhs(env))
    if op == "!=":
        return lambda env: abs(lhs(env) - rhs(env))
    raise ValueError(f"unknown comparison {op!r}")


class Classic:
    """Standard robustness: a predicate scores its margin."""

    name = "classic"

    def compile(self, p: A.Predicate) -> Callable:
        return compile_margin(p)


def _qualitative(x):
    if isinstance(x, (float, int)):
        return INF if x > 0 else -INF
    import numpy as np
    return np.where(x > 0, INF, -INF)


class Relative:
    """Robustness over ``measured`` variables relative to ``fixed`` ones.

    A predicate over variables ``Y`` scores 0 when ``Y`` reaches outside
    ``measured | fixed``, its margin when ``Y`` touches ``measured``, and
    ``+/-inf`` (by the sign of the margin, zero counting as negative) when
    ``Y`` lies inside ``fixed``.
    """

    name = "relative"

    def __init__(self, measured, fixed):
        self.measured = frozenset(measured)
        self.fixed = frozenset(fixed)
        overlap = self.measured & self.fixed
        if overlap:
            raise OverlappingSets(f"measured and fixed sets overlap on {sorted(overlap)}")

    def compile(self, p: A.Predicate) -> Callable:
        ys = A.variables(p)
        margin = compile_margin(p)
        if not ys <= (self.measured | self.fixed):
            return lambda env: _zero_like(margin(env))
        if not ys <= self.fixed:
            return margin
        return lambda env: _qualitative(margin(env))


def _zero_like(x):
    # keeps array shape when evaluated on numpy columns
    if isinstance(x, (float, int)):
        return 0.0
    import numpy as np
    return np.zeros_like(x, dtype=float)


def strategy_for(spec, semantics: str):
    """Pick the predicate strategy named by ``semantics`` for ``spec``."""
    if semantics in ("classic", "classical", None):
        return Classic()
    from .iastl import input_vacuity_strategy, output_robustness_strategy
    if semantics in ("out-rob", "output-robustness"):
        return output_robustness_strategy(spec)
    if semantics in ("in-vac", "input-vacuity"):
        return input_vacuity_strategy(spec)
    raise ValueError(f"unknown semantics {semantics!r}")
