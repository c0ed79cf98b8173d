"""Shared value types: exact time, traces, intervals, extended reals, series."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

INF = math.inf

TimeLike = Union[int, float, str, Fraction]


class StlError(Exception):
    """Base class for every error raised by this package."""


class TraceError(StlError):
    pass


class NonMonotoneTime(TraceError):
    pass


class NonUniformTrace(TraceError):
    pass


class UnknownVariable(TraceError):
    pass


class MissingVariable(TraceError):
    pass


class OutOfDomain(TraceError):
    pass


class SpecError(StlError):
    pass


def as_time(value: TimeLike) -> Fraction:
    """Convert a timestamp or interval bound to an exact rational.

    Floats are read through their shortest decimal repr, so ``0.1`` becomes
    ``1/10`` rather than the binary approximation.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("boolean is not a timestamp")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"timestamp must be finite, got {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a timestamp")


# Extended reals are plain floats; +/-inf are the lattice top and bottom.

def ext_min(a: float, b: float) -> float:
    return a if a <= b else b


def ext_max(a: float, b: float) -> float:
    return a if a >= b else b


def ext_neg(a: float) -> float:
    return -a


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo, hi]`` of non-negative time; ``hi`` may be ``inf``."""

    lo: Fraction
    hi: Union[Fraction, float] = INF

    def __post_init__(self):
        lo = as_time(self.lo)
        hi = self.hi if self.hi == INF else as_time(self.hi)
        if lo < 0:
            raise ValueError(f"interval lower bound must be >= 0, got {lo}")
        if hi < lo:
            raise ValueError(f"interval [{lo}, {hi}] has lo > hi")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def bounded(self) -> bool:
        return self.hi != INF

    @property
    def width(self):
        return self.hi - self.lo

    def __str__(self) -> str:
        hi = "inf" if not self.bounded else _fmt_time(self.hi)
        return f"[{_fmt_time(self.lo)}:{hi}]"


UNBOUNDED = Interval(Fraction(0), INF)


def _fmt_time(t: Fraction) -> str:
    if t.denominator == 1:
        return str(t.numerator)
    return f"{t.numerator}/{t.denominator}"


def format_time(t: Fraction) -> str:
    """Render a timestamp for output; decimal when exact, ``p/q`` otherwise."""
    if t.denominator == 1:
        return str(t.numerator)
    d = t.denominator
    while d % 2 == 0:
        d //= 2
    while d % 5 == 0:
        d //= 5
    if d == 1:
        # terminating decimal
        digits = 0
        scaled = t
        while scaled.denominator != 1:
            scaled *= 10
            digits += 1
        sign = "-" if scaled < 0 else ""
        s = str(abs(scaled.numerator)).rjust(digits + 1, "0")
        return f"{sign}{s[:-digits]}.{s[-digits:]}"
    return f"{t.numerator}/{t.denominator}"


@dataclass(frozen=True)
class Sample:
    time: Fraction
    value: float


class Trace:
    """Per-variable finite sequences of ``(time, value)`` samples.

    Timestamps are converted to exact rationals and must strictly increase per
    variable; values must be finite.
    """

    def __init__(self, variables: Mapping[str, Iterable] = None):
        self._vars: dict[str, tuple[Sample, ...]] = {}
        for name, samples in (variables or {}).items():
            self._vars[name] = self._check(name, samples)

    @staticmethod
    def _check(name: str, samples: Iterable) -> tuple[Sample, ...]:
        out = []
        prev = None
        for item in samples:
            if isinstance(item, Sample):
                t, v = item.time, item.value
            else:
                t, v = item
            t = as_time(t)
            v = float(v)
            if math.isnan(v):
                raise TraceError(f"NaN value for {name!r} at t={t}")
            if not math.isfinite(v):
                raise TraceError(f"non-finite value for {name!r} at t={t}")
            if t < 0:
                raise TraceError(f"negative timestamp for {name!r}: {t}")
            if prev is not None and t <= prev:
                raise NonMonotoneTime(
                    f"timestamps for {name!r} must strictly increase ({prev} then {t})")
            out.append(Sample(t, v))
            prev = t
        return tuple(out)

    @classmethod
    def from_columns(cls, times: Sequence, columns: Mapping[str, Sequence[float]]) -> "Trace":
        """Build a trace where every variable is sampled at the same ``times``."""
        return cls({name: list(zip(times, vals)) for name, vals in columns.items()})

    @property
    def names(self) -> list[str]:
        return list(self._vars)

    def __getitem__(self, name: str) -> tuple[Sample, ...]:
        try:
            return self._vars[name]
        except KeyError:
            raise UnknownVariable(f"variable {name!r} not in trace") from None

    def __contains__(self, name: str) -> bool:
        return name in self._vars

    def __iter__(self) -> Iterator[str]:
        return iter(self._vars)

    def items(self):
        return self._vars.items()

    def __len__(self) -> int:
        return len(self._vars)

    def __eq__(self, other) -> bool:
        return isinstance(other, Trace) and self._vars == other._vars

    def __repr__(self) -> str:
        sizes = ", ".join(f"{k}:{len(v)}" for k, v in self._vars.items())
        return f"Trace({sizes})"

    def require(self, names: Iterable[str]) -> None:
        for name in names:
            if name not in self._vars:
                raise UnknownVariable(f"formula variable {name!r} missing from trace")
            if not self._vars[name]:
                raise TraceError(f"variable {name!r} has no samples")

    def restrict(self, names: Iterable[str]) -> "Trace":
        return Trace({n: self[n] for n in names})


@dataclass
class RobustnessSeries:
    """Timestamped robustness values; timestamps strictly increase."""

    times: list = field(default_factory=list)
    values: list = field(default_factory=list)

    def __post_init__(self):
        if len(self.times) != len(self.values):
            raise ValueError("times and values differ in length")
        for a, b in zip(self.times, self.times[1:]):
            if b <= a:
                raise ValueError("robustness series timestamps must strictly increase")

    def __len__(self) -> int:
        return len(self.times)

    def __iter__(self):
        return iter(zip(self.times, self.values))

    def __getitem__(self, i):
        return self.times[i], self.values[i]

    def at(self, t: TimeLike) -> float:
        t = as_time(t)
        for ti, v in zip(self.times, self.values):
            if ti == t:
                return v
        raise OutOfDomain(f"no robustness value at t={t}")

    def as_pairs(self) -> list[tuple[Fraction, float]]:
        return list(zip(self.times, self.values))


UNITS = {"s": Fraction(1), "ms": Fraction(1, 1000), "us": Fraction(1, 10**6),
         "ns": Fraction(1, 10**9)}

ROLES = ("input", "output", "internal")


@dataclass
class Specification:
    """A named formula with typed variable declarations and I/O roles.

    ``period`` is expressed in ``unit``; trace timestamps and interval bounds
    are read in the same unit.
    """

    name: str
    declarations: dict
    formula: object
    target: str = None
    period: Fraction = None
    unit: str = "s"

    def __post_init__(self):
        for var, role in self.declarations.items():
            if role not in ROLES:
                raise SpecError(f"unknown role {role!r} for {var!r}")
        if self.unit not in UNITS:
            raise SpecError(f"unknown time unit {self.unit!r}")
        if self.period is not None:
            self.period = as_time(self.period)
            if self.period <= 0:
                raise SpecError("period must be positive")
        if self.target is not None and self.target not in self.declarations:
            raise SpecError(f"assignment target {self.target!r} is not declared")
        from .ast import variables
        missing = variables(self.formula) - set(self.declarations)
        if missing:
            raise SpecError(f"undeclared variables in formula: {sorted(missing)}")

    @classmethod
    def from_formula(cls, formula, name: str = "spec", inputs=(), outputs=(),
                     period=None, unit: str = "s") -> "Specification":
        """Wrap a bare formula; undeclared formula variables become internal."""
        from .ast import variables
        decl = {v: "internal" for v in sorted(variables(formula))}
        decl.update({v: "input" for v in inputs})
        decl.update({v: "output" for v in outputs})
        return cls(name=name, declarations=decl, formula=formula, period=period, unit=unit)

    @property
    def inputs(self) -> set[str]:
        return {v for v, r in self.declarations.items() if r == "input"}

    @property
    def outputs(self) -> set[str]:
        return {v for v, r in self.declarations.items() if r == "output"}

    @property
    def has_roles(self) -> bool:
        return bool(self.inputs or self.outputs)
