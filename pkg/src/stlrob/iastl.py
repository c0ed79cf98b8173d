"""Interface-aware robustness: relative robustness, output robustness, input vacuity.

All three are the ordinary engines run with a :class:`Relative` predicate
strategy; only the scoring of numeric predicates changes.
"""
from __future__ import annotations

from .core import RobustnessSeries, Specification, StlError, Trace
from .predicates import OverlappingSets, Relative

__all__ = [
    "NoRoleDeclarations", "OverlappingSets", "relative_strategy", "relative_robustness",
    "output_robustness", "input_vacuity", "output_robustness_strategy",
    "input_vacuity_strategy",
]


class NoRoleDeclarations(StlError):
    pass


def relative_strategy(measured, fixed) -> Relative:
    return Relative(measured, fixed)


def _roles(spec: Specification):
    if not isinstance(spec, Specification) or not spec.has_roles:
        raise NoRoleDeclarations("specification declares no input/output roles")
    return spec.inputs, spec.outputs


def output_robustness_strategy(spec: Specification) -> Relative:
    """Outputs measured, every other declared variable held fixed."""
    _, outputs = _roles(spec)
    return Relative(outputs, set(spec.declarations) - outputs)


def input_vacuity_strategy(spec: Specification) -> Relative:
    """Inputs measured relative to the empty set."""
    inputs, _ = _roles(spec)
    return Relative(inputs, ())


def _run(spec, trace, strategy, mode):
    if mode == "discrete":
        from .discrete import evaluate_discrete
        return evaluate_discrete(spec, trace, strategy)
    if mode == "dense":
        from .dense import evaluate_dense
        return evaluate_dense(spec, trace, strategy)
    raise ValueError(f"unknown time mode {mode!r}")


def relative_robustness(formula, trace: Trace, measured, fixed, t=None, mode="discrete"):
    """Robustness of ``formula`` over ``measured`` relative to ``fixed``.

    Returns the value at time ``t``, or the whole series/signal when ``t`` is None.
    """
    out = _run(formula, trace, Relative(measured, fixed), mode)
    if t is None:
        return out
    return out.at(t) if mode == "discrete" else out.value_at(t)


def output_robustness(spec: Specification, trace: Trace, mode="discrete") -> RobustnessSeries:
    return _run(spec, trace, output_robustness_strategy(spec), mode)


def input_vacuity(spec: Specification, trace: Trace, mode="discrete") -> RobustnessSeries:
    return _run(spec, trace, input_vacuity_strategy(spec), mode)
