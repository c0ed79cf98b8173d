import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stlrob.core import (INF, Interval, NonMonotoneTime, RobustnessSeries, Specification,
                         SpecError, Trace, TraceError, UnknownVariable, as_time, ext_max,
                         ext_min, ext_neg, format_time)
from stlrob.parser import parse_formula

ext = st.one_of(st.floats(allow_nan=False), st.sampled_from([INF, -INF]))


def test_ext_examples():
    assert ext_min(INF, 3) == 3
    assert ext_neg(-INF) == INF
    assert ext_max(-2, -INF) == -2


@given(ext)
def test_double_negation(x):
    assert ext_neg(ext_neg(x)) == x


@given(ext, ext)
def test_de_morgan_on_values(x, y):
    assert ext_min(x, y) == ext_neg(ext_max(ext_neg(x), ext_neg(y)))


@given(ext, ext, ext)
def test_min_max_associative(x, y, z):
    assert ext_min(ext_min(x, y), z) == ext_min(x, ext_min(y, z))
    assert ext_max(ext_max(x, y), z) == ext_max(x, ext_max(y, z))


def test_as_time_is_exact():
    assert as_time(0.1) == Fraction(1, 10)
    assert as_time("3/4") == Fraction(3, 4)
    assert as_time(2) == 2
    with pytest.raises(ValueError):
        as_time(math.inf)


def test_interval_invariants():
    assert Interval(0, 5).bounded
    assert not Interval(2).bounded
    assert str(Interval(1, 5)) == "[1:5]"
    assert str(Interval(Fraction(1, 2))) == "[1/2:inf]"
    with pytest.raises(ValueError):
        Interval(3, 2)
    with pytest.raises(ValueError):
        Interval(-1, 2)


@given(st.lists(st.integers(0, 1000), min_size=2, max_size=6, unique=True))
def test_trace_rejects_every_non_identity_permutation(times):
    times = sorted(times)
    Trace({"x": [(t, 0.0) for t in times]})
    for perm in itertools.islice(itertools.permutations(times), 1, 30):
        with pytest.raises(NonMonotoneTime):
            Trace({"x": [(t, 0.0) for t in perm]})


def test_trace_rejects_nan_and_inf():
    with pytest.raises(TraceError):
        Trace({"x": [(0, math.nan)]})
    with pytest.raises(TraceError):
        Trace({"x": [(0, math.inf)]})


def test_trace_lookup_errors():
    tr = Trace({"x": [(0, 1.0)]})
    with pytest.raises(UnknownVariable):
        tr["y"]


def test_series_monotone():
    with pytest.raises(ValueError):
        RobustnessSeries([1, 1], [0.0, 0.0])
    s = RobustnessSeries([Fraction(0), Fraction(1)], [1.0, -INF])
    assert s.at(1) == -INF


def test_specification_checks():
    f = parse_formula("x > 0")
    with pytest.raises(SpecError):
        Specification("s", {}, f)
    with pytest.raises(SpecError):
        Specification("s", {"x": "bogus"}, f)
    with pytest.raises(SpecError):
        Specification("s", {"x": "input"}, f, unit="min")
    spec = Specification.from_formula(f, inputs=["x"])
    assert spec.inputs == {"x"} and spec.has_roles


def test_format_time():
    assert format_time(Fraction(5, 2)) == "2.5"
    assert format_time(Fraction(1, 3)) == "1/3"
    assert format_time(Fraction(7)) == "7"
