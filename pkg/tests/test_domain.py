import numpy as np
import pytest
from hypothesis import given, strategies as st

from ouroboros.domain import (
    AllIntegers,
    AllReals,
    FiniteSet,
    IntRange,
    Mixed,
    Power,
    RealInterval,
    format_domain,
    format_signature,
    parse_domain,
    parse_signature,
    signature_of,
)
from ouroboros.errors import DomainSpecError, NotEnumerableError


def test_contains_basic_cases():
    assert RealInterval(0.0, 1.0).contains(0.5)
    assert not IntRange(-50, 50).contains(51)
    assert FiniteSet((7,)).contains(7)
    assert not RealInterval(0.0, 1.0, lo_closed=False).contains(0.0)
    assert not AllIntegers().contains(0.5)
    assert AllIntegers().contains(3.0)


def test_infinite_ends_are_open():
    d = RealInterval(0.0, float("inf"))
    assert d.lo_closed and not d.hi_closed
    assert parse_domain("real[0,inf)") == d


def test_empty_domains_rejected():
    with pytest.raises(ValueError):
        IntRange(3, 2)
    with pytest.raises(ValueError):
        RealInterval(1.0, 1.0, lo_closed=False)
    with pytest.raises(ValueError):
        FiniteSet(())


def test_finite_set_dedups_and_sorts():
    d = FiniteSet((3, 1, 3, 2))
    assert d.values == (1, 2, 3)
    assert d.size == 3


def test_enumerate_infinite_raises():
    with pytest.raises(NotEnumerableError):
        list(AllReals().enumerate())


def test_int_range_enumeration_and_size():
    d = IntRange(-50, 50)
    values = list(d.enumerate())
    assert len(values) == d.size == 101
    assert all(d.contains(v) for v in values)


def test_int_range_sampling_is_uniform_enough():
    d = IntRange(0, 9)
    draws = d.sample(10_000, np.random.default_rng(7))
    counts = np.bincount(draws, minlength=10)
    assert all(800 <= c <= 1200 for c in counts)


@pytest.mark.parametrize("d", [RealInterval(0.0, 1.0), RealInterval(5.0, float("inf")), AllReals(), AllIntegers(), FiniteSet((1, 2.5))])
def test_samples_are_members_and_reproducible(d):
    a = d.sample(500, np.random.default_rng(3))
    b = d.sample(500, np.random.default_rng(3))
    assert a == b
    assert all(d.contains(v) for v in a)


def test_signature_enumeration_is_cartesian():
    sig = Power(IntRange(0, 2), 2)
    points = list(sig.enumerate())
    assert sig.size == 9
    assert points[0] == (0, 0) and points[-1] == (2, 2)


def test_mixed_output_must_lie_in_every_factor():
    sig = Mixed((RealInterval(0.0, 1.0), IntRange(0, 9)))
    assert sig.escapes(0.5) == ["int[0..9]"]
    assert sig.escapes(1) == []
    assert sig.escapes(5) == ["real[0,1]"]


def test_signature_of_collapses_equal_factors():
    assert signature_of([AllReals(), AllReals()]) == Power(AllReals(), 2)
    assert isinstance(signature_of([AllReals(), AllIntegers()]), Mixed)


def test_iter_sample_matches_arity():
    sig = Power(AllReals(), 5)
    points = sig.sample(10, np.random.default_rng(0))
    assert len(points) == 10
    assert all(len(p) == 5 for p in points)


@pytest.mark.parametrize(
    "text",
    ["set{1,2,3}", "int[-50..50]", "real[0,1]", "real(0,1]", "real[0,inf)", "R", "Z", "set{0.5,7}"],
)
def test_domain_syntax_round_trip(text):
    assert format_domain(parse_domain(text)) == text


def test_signature_syntax():
    assert parse_signature("R^3") == Power(AllReals(), 3)
    mixed = parse_signature("real[0,1] x int[0..9]")
    assert mixed == Mixed((RealInterval(0.0, 1.0), IntRange(0, 9)))
    assert format_signature(mixed) == "real[0,1] x int[0..9]"
    assert parse_signature("R x R") == Power(AllReals(), 2)


@pytest.mark.parametrize("text", ["int[1..0]", "real[2,1]", "interval", "set{a}", "R^0"])
def test_bad_domain_syntax(text):
    with pytest.raises(DomainSpecError):
        parse_signature(text)


@given(st.integers(-10**6, 10**6), st.integers(0, 1000))
def test_int_range_text_round_trip(lo, width):
    d = IntRange(lo, lo + width)
    assert parse_domain(format_domain(d)) == d


@given(st.floats(-1e9, 1e9, allow_nan=False), st.floats(0.001, 1e9, allow_nan=False), st.booleans(), st.booleans())
def test_real_interval_text_round_trip(lo, width, lc, hc):
    d = RealInterval(lo, lo + width, lc, hc)
    assert parse_domain(format_domain(d)) == d


def test_bounded_interval_ignores_the_window():
    d = RealInterval(0.0, 5e6)
    draws = d.sample(10_000, np.random.default_rng(1))
    assert all(d.contains(v) for v in draws)
    assert max(draws) > 4e6
    assert sum(v > 2e6 for v in draws) > 5000


def test_half_line_is_sampled_inside_the_window():
    draws = RealInterval(0.0, float("inf")).sample(1000, np.random.default_rng(2), window=10.0)
    assert all(0.0 <= v <= 10.0 for v in draws)


def test_interval_without_interior_float():
    with pytest.raises(ValueError):
        RealInterval(0.0, 5e-324, False, False)
    d = RealInterval(0.0, 5e-324, False, True)
    assert d.sample(20, np.random.default_rng(0)) == [5e-324] * 20


def test_integer_ranges_beyond_int64():
    d = IntRange(0, 10**20)
    draws = d.sample(1000, np.random.default_rng(4))
    assert all(isinstance(v, int) and d.contains(v) for v in draws)
    assert max(draws) > 2**63
    wide = AllIntegers().sample(100, np.random.default_rng(4), window=1e30)
    w = int(1e30)
    assert all(-w <= v <= w for v in wide)
    assert max(abs(v) for v in wide) > 2**63
