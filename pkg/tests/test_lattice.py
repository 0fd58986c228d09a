import math
import random
from fractions import Fraction

import mpmath
import pytest

from slopebound.errors import DegenerateBasis, PrecisionExhausted, ZeroVector
from slopebound.lattice import (IntVector, LatticeBasis, NormalizedBasis, enumerate_short,
                                is_primitive, normalize, reduce, reduce_with_transform)
from slopebound.precise import Ordering, PreciseReal

SQRT3 = PreciseReal.sqrt_of(3)


def vec(v):
    return tuple(c.rational() for c in v)


def is_gauss_reduced(basis):
    g11, g12, g22 = basis.gram()
    return (g11.cmp(g22) is not Ordering.GREATER
            and (2 * g12).cmp(g11) is not Ordering.GREATER
            and (-2 * g12).cmp(g11) is not Ordering.GREATER)


def test_reduce_shear():
    out = reduce(LatticeBasis.of((1, 0), (5, "sqrt3")))
    assert vec(out.e1) == (1, 0)
    assert out.e2[0].rational() == 0 and out.e2[1].cmp(SQRT3) is Ordering.EQUAL


def test_reduce_keeps_reduced_basis():
    out = reduce(LatticeBasis.of((1, 0), ("0.3", "sqrt3")))
    assert vec(out.e1) == (1, 0)
    assert out.e2[0].rational() == Fraction(3, 10)


def test_reduce_integer_basis():
    out, u = reduce_with_transform(LatticeBasis.of((2, 1), (3, 1)))
    assert abs(out.det().rational()) == 1
    assert out.gram()[0].rational() == 1
    assert is_gauss_reduced(out)
    assert abs(u[0][0] * u[1][1] - u[0][1] * u[1][0]) == 1


def test_reduce_degenerate():
    with pytest.raises(DegenerateBasis):
        reduce(LatticeBasis.of((1, 2), (2, 4)))


def test_reduce_is_idempotent_on_invariants():
    rng = random.Random(3)
    for _ in range(50):
        b = LatticeBasis.of((rng.randint(-9, 9), Fraction(rng.randint(1, 99), 7)),
                            (rng.randint(-9, 9) + Fraction(1, 3), rng.randint(-9, 9)))
        if b.det().rational() == 0:
            continue
        once = normalize(b)
        twice = normalize(reduce(b))
        for f in ("d2", "x", "y2"):
            assert getattr(once, f).cmp(getattr(twice, f)) is Ordering.EQUAL


def test_normalize_canonical_frame():
    nb = normalize(LatticeBasis.of((1, 0), ("0.25", "sqrt3")))
    assert nb.d2.rational() == 1 and nb.x.rational() == Fraction(1, 4)
    assert nb.y2.rational() == 3


def test_normalize_reflection():
    nb = normalize(LatticeBasis.of((1, 0), ("-0.25", "sqrt3")))
    assert nb.x.rational() == Fraction(1, 4) and nb.y2.rational() == 3


@mpmath.workdps(50)
def test_normalize_rotated_input_against_mpmath():
    e1, e2 = ("0", "1.15094"), ("1.9934", "0.575")
    nb = normalize(LatticeBasis.of(e1, e2))
    a, b = (mpmath.mpf(c) for c in e1)
    c, d = (mpmath.mpf(c) for c in e2)
    n1 = a * a + b * b
    x = abs(a * c + b * d) / n1
    x = min(x - mpmath.floor(x), mpmath.ceil(x) - x)
    y = abs(a * d - b * c) / n1
    assert abs(float(nb.d) - float(mpmath.sqrt(n1))) < 1e-12
    assert 0 <= nb.x.rational() <= Fraction(1, 2)
    assert abs(float(nb.x) - float(x)) < 1e-12
    assert abs(float(nb.y) - float(y)) < 1e-12
    # these decimals give an area just below d^2*sqrt3, so y falls short of sqrt3
    assert nb.y.cmp(SQRT3) is Ordering.LESS


def test_normalized_y_at_least_sqrt3_for_admissible_lattices():
    rng = random.Random(11)
    for _ in range(100):
        d = 1 + Fraction(rng.randint(0, 100), 50)
        x = Fraction(rng.choice([-1, 1]) * rng.randint(1, 49), 100)
        y2 = 3 + Fraction(rng.randint(0, 300), 100)
        # a rotated copy of d*(1,0), d*(x,y) with a rational rotation (3/5, 4/5)
        c, s = Fraction(3, 5), Fraction(4, 5)
        y = PreciseReal.of(y2).sqrt()
        e1 = (d * c, d * s)
        e2 = (d * (x * c) - d * s * y, d * (x * s) + d * c * y)
        nb = normalize(LatticeBasis((PreciseReal.of(e1[0]), PreciseReal.of(e1[1])), e2))
        assert nb.y2.cmp(3) is not Ordering.LESS
        assert nb.d2.cmp(d * d) is Ordering.EQUAL


def test_cancelling_monomials_decide_ties():
    # rotated rectangle: e1.e2 vanishes exactly, term by term
    c, s = Fraction(3, 5), Fraction(4, 5)
    y = PreciseReal.sqrt_of(3)
    nb = normalize(LatticeBasis((PreciseReal.of(c), PreciseReal.of(s)), (-s * y, c * y)))
    assert nb.x.rational() == 0 and nb.y2.rational() == 3


def test_irrational_tie_is_not_guessed():
    # rotated copy of (1,0), (1/2, sqrt3): 2*e1.e2 == |e1|^2 only after cancellation
    c, s = Fraction(3, 5), Fraction(4, 5)
    y = PreciseReal.sqrt_of(3)
    e2 = (c / 2 - s * y, s / 2 + c * y)
    with pytest.raises(PrecisionExhausted):
        normalize(LatticeBasis((PreciseReal.of(c), PreciseReal.of(s)), e2))


@pytest.mark.parametrize("v, expected", [((2, 3), True), ((2, 4), False), ((0, -1), True),
                                         ((0, -2), False), ((-1, 0), True)])
def test_is_primitive(v, expected):
    assert is_primitive(v) is expected


def test_is_primitive_zero():
    with pytest.raises(ZeroVector):
        is_primitive((0, 0))


def naive_short(d, x, y2, lmax, primitive):
    """Exact rational double loop over a generous box."""
    box = int(lmax / d) + 3
    out = []
    for b in range(-box, box + 1):
        for a in range(-3 * box - 3, 3 * box + 4):
            if (a, b) == (0, 0) or (primitive and math.gcd(a, b) != 1):
                continue
            if d * d * ((a + b * x) ** 2 + b * b * y2) <= lmax * lmax:
                out.append(IntVector(a, b))
    return sorted(out, key=lambda v: (v.b, v.a))


def test_enumerate_examples():
    nb = NormalizedBasis.of(1, 0, "sqrt3")
    assert len(enumerate_short(nb, 2 * PreciseReal.pi())) == 48
    assert len(enumerate_short(nb, 6)) == 40
    assert enumerate_short(nb, "0.5") == []
    assert enumerate_short(nb, 6) == naive_short(1, 0, 3, 6, True)


def test_enumerate_matches_naive_on_random_bases():
    rng = random.Random(5)
    for _ in range(100):
        d = 1 + Fraction(rng.randint(0, 20), 10)
        x = Fraction(rng.randint(0, 50), 100)
        y2 = 3 + Fraction(rng.randint(0, 200), 50)
        lmax = Fraction(rng.randint(10, 120), 10)
        primitive = rng.random() < 0.7
        nb = NormalizedBasis(PreciseReal.of(d * d), PreciseReal.of(x), PreciseReal.of(y2))
        got = enumerate_short(nb, lmax, primitive)
        assert got == naive_short(d, x, y2, lmax, primitive)
        assert set(got) == {IntVector(-a, -b) for a, b in got}


def test_enumerate_counts_boundary_points():
    # (2,0) and (1,1) lie exactly on the circle of radius 2 for x=0, y=sqrt3
    nb = NormalizedBasis.of(1, 0, "sqrt3")
    got = enumerate_short(nb, 2, primitive_only=False)
    assert IntVector(2, 0) in got and IntVector(1, 1) in got


def test_enumerate_rejects_nonpositive_radius():
    with pytest.raises(ValueError):
        enumerate_short(NormalizedBasis.of(1, 0, "sqrt3"), 0)
