from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from slopebound.errors import PrecisionExhausted
from slopebound.precise import (Ball, Ordering, PreciseReal, parse_rational, parse_real,
                                precision_schedule, simplest_between)



@mpmath.workdps(200)
def test_pi_enclosure_matches_mpmath():
    for prec in (8, 64, 300):
        lo, hi = PreciseReal.pi().enclosure(prec)
        assert lo < hi
        assert mpmath.mpf(lo.numerator) / lo.denominator < mpmath.pi < \
            mpmath.mpf(hi.numerator) / hi.denominator


def test_schedule_doubles_up_to_cap():
    assert list(precision_schedule(64, 1024)) == [64, 128, 256, 512, 1024]
    assert list(precision_schedule(64, 100)) == [64, 100]


def test_exact_ties_are_decided():
    pi = PreciseReal.pi()
    assert (2 * pi - 2 * pi).cmp(0) is Ordering.EQUAL
    assert PreciseReal.sqrt_of(3).square().cmp(3) is Ordering.EQUAL
    assert (PreciseReal.sqrt_of(12) / 2).cmp(PreciseReal.sqrt_of(3)) is Ordering.EQUAL


def test_irrational_comparisons():
    assert PreciseReal.pi().cmp(Fraction(355, 113)) is Ordering.LESS
    assert PreciseReal.sqrt_of(2).cmp("1.4142135623730950488") is Ordering.GREATER


def test_undecided_and_decide():
    # a lazily built zero that no exact rule recognises
    pi = PreciseReal.pi()
    zero = (pi + 1) - (pi * 1 + 1) + (pi - pi * 1)
    assert zero.cmp(0, 32, 64) in (Ordering.UNDECIDED, Ordering.EQUAL)
    lazy = PreciseReal(lambda p: (Ball.pi(p) - Ball.pi(p)))
    assert lazy.cmp(0, 32, 64) is Ordering.UNDECIDED
    with pytest.raises(PrecisionExhausted):
        lazy.decide(0, 32, 64)


def test_floats_rejected():
    with pytest.raises(TypeError):
        PreciseReal.of(1.5)


@pytest.mark.parametrize("text, expected", [
    ("1.15094", Fraction(57547, 50000)),
    ("-0.25", Fraction(-1, 4)),
    ("3/4", Fraction(3, 4)),
    ("2", Fraction(2)),
    ("1e-2", Fraction(1, 100)),
])
def test_parse_rational(text, expected):
    assert parse_rational(text) == expected


@pytest.mark.parametrize("text, value", [
    ("sqrt3", lambda: mpmath.sqrt(3)),
    ("2pi", lambda: 2 * mpmath.pi),
    ("2/3*pi", lambda: 2 * mpmath.pi / 3),
    ("-sqrt(2)", lambda: -mpmath.sqrt(2)),
    ("0.5*sqrt3", lambda: mpmath.sqrt(3) / 2),
])
@mpmath.workdps(200)
def test_parse_real(text, value):
    value = value()
    lo, hi = parse_real(text).enclosure(128)
    assert mpmath.mpf(lo.numerator) / lo.denominator <= value <= mpmath.mpf(hi.numerator) / hi.denominator


def test_parse_real_rejects_garbage():
    with pytest.raises(ValueError):
        parse_real("1.2.3")


@given(st.fractions(min_value=-100, max_value=100, max_denominator=1000),
       st.fractions(min_value=-100, max_value=100, max_denominator=1000))
def test_arithmetic_encloses_exact_value(a, b):
    x, y = PreciseReal.of(a), PreciseReal.of(b)
    for got, want in ((x + y, a + b), (x - y, a - b), (x * y, a * b)):
        lo, hi = got.enclosure(40)
        assert lo <= want <= hi
    if b:
        lo, hi = (x / y).enclosure(40)
        assert lo <= a / b <= hi


@given(st.integers(min_value=0, max_value=10**12))
def test_sqrt_encloses(n):
    lo, hi = PreciseReal.of(n).sqrt().enclosure(64)
    assert lo * lo <= n <= hi * hi


@given(st.fractions(min_value=0, max_value=10, max_denominator=10**6),
       st.fractions(min_value=0, max_value=10, max_denominator=10**6))
def test_simplest_between_is_inside_and_simplest(a, b):
    if a == b:
        return
    lo, hi = min(a, b), max(a, b)
    q = simplest_between(lo, hi)
    assert lo < q < hi
    # no rational with a smaller denominator fits
    for den in range(1, q.denominator):
        num = (lo * den).__floor__() + 1
        assert not Fraction(num, den) < hi


def test_simplest_between_examples():
    assert simplest_between(Fraction(1, 7), Fraction(1, 6)) == Fraction(2, 13)
    assert simplest_between(Fraction(0), Fraction(1, 2)) == Fraction(1, 3)


def test_to_decimal():
    assert PreciseReal.pi().to_decimal(10) == "3.141592654"
    assert PreciseReal.of(Fraction(1, 3)).to_decimal(5) == "0.33333"
