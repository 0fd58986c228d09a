"""Closed-form bounds on slopes, slope lengths and intersection numbers."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .counting import CountSpec, RadiusMode, _as_fraction, n_gd
from .errors import InvalidTopology, NonpositiveArea, ZeroVector
from .lattice import NormalizedBasis, enumerate_short
from .precise import (DEFAULT_PRECISION, MAX_PRECISION, Ordering, PreciseReal,
                      RealLike)

CAO_MEYERHOFF_AREA = Fraction(335, 100)


@dataclass(frozen=True, order=True)
class Slope:
    """Primitive (p, q) up to sign; stored with q > 0, or q == 0 and p > 0."""

    p: int
    q: int

    def __post_init__(self):
        if self.p == 0 and self.q == 0:
            raise ZeroVector("(0, 0) is not a slope")
        if math.gcd(self.p, self.q) != 1:
            raise ValueError(f"slope ({self.p}, {self.q}) is not primitive")
        if self.q < 0 or (self.q == 0 and self.p < 0):
            object.__setattr__(self, "p", -self.p)
            object.__setattr__(self, "q", -self.q)

    def __str__(self) -> str:
        return f"{self.p},{self.q}"


@dataclass(frozen=True)
class CuspTorus:
    basis: NormalizedBasis
    assume_area_floor: bool = False

    @property
    def d(self) -> PreciseReal:
        return self.basis.d

    @property
    def area(self) -> PreciseReal:
        return self.basis.area()

    def area_for_bounds(self) -> PreciseReal:
        """The area, or the 3.35 floor when that is assumed and larger."""
        if self.assume_area_floor and self.area.decide(CAO_MEYERHOFF_AREA) is Ordering.LESS:
            return PreciseReal.of(CAO_MEYERHOFF_AREA)
        return self.area


@dataclass(frozen=True)
class BoundReport:
    name: str
    inputs: dict[str, Any]
    value: Any
    provenance: str
    certified: bool = True


class Verdict(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNDECIDED = "undecided"


class NullHomologous(enum.Enum):
    NONE = "none"
    ONE = "one"


def _radius(g: Fraction, mode: RadiusMode) -> PreciseReal:
    if mode is RadiusMode.TWO_PI:
        return 2 * g * PreciseReal.pi()
    return PreciseReal.of(6 * g)


def slope_length(torus: CuspTorus, s: Slope) -> PreciseReal:
    """Length of p*e1' + q*e2' on the normalized cusp lattice."""
    return torus.basis.norm2(s.p, s.q).sqrt()


def short_slopes(torus: CuspTorus, g: RealLike, mode: RadiusMode = RadiusMode.TWO_PI,
                 prec: int = DEFAULT_PRECISION, max_prec: int = MAX_PRECISION) -> list[Slope]:
    """Slopes of length at most 2*g*pi (or 6*g), one per +-pair, ordered by (q, p)."""
    g = _as_fraction(g)
    if g <= 0:
        raise ValueError("g must be positive")
    vectors = enumerate_short(torus.basis, _radius(g, mode), True, prec, max_prec)
    return [Slope(a, b) for a, b in vectors if b > 0 or (b == 0 and a > 0)]


def slopes_up_to(torus: CuspTorus, lmax: RealLike, prec: int = DEFAULT_PRECISION,
                 max_prec: int = MAX_PRECISION) -> list[Slope]:
    vectors = enumerate_short(torus.basis, lmax, True, prec, max_prec)
    return [Slope(a, b) for a, b in vectors if b > 0 or (b == 0 and a > 0)]


def length_bound(g: int, n: int) -> PreciseReal:
    """2*pi*(2g - 2 + n)/n for a boundary curve of a genus g surface with n boundaries."""
    if g < 0 or n < 1:
        raise InvalidTopology("need g >= 0 and n >= 1")
    if 2 * g - 2 + n <= 0:
        raise InvalidTopology(f"2g - 2 + n = {2 * g - 2 + n} is not positive")
    return PreciseReal.pi() * Fraction(2 * (2 * g - 2 + n), n)


def total_length_check(lengths: Sequence[RealLike], g: int,
                       prec: int = DEFAULT_PRECISION,
                       max_prec: int = MAX_PRECISION) -> Verdict:
    """Whether sum(L_i - 2*pi) <= 2*pi*(2g - 2)."""
    if not lengths:
        raise ValueError("lengths must be nonempty")
    two_pi = 2 * PreciseReal.pi()
    excess = PreciseReal.of(0)
    for length in lengths:
        excess = excess + (PreciseReal.of(length) - two_pi)
    r = excess.cmp(two_pi * (2 * g - 2), prec, max_prec)
    if r is Ordering.UNDECIDED:
        return Verdict.UNDECIDED
    return Verdict.FAILS if r is Ordering.GREATER else Verdict.HOLDS


def slope_count_bound(g: int, d: RealLike = 1, mode: RadiusMode = RadiusMode.TWO_PI) -> BoundReport:
    """N(1, d) when g <= 1, else N(g, d) + 1; the upper end if uncertified."""
    if g < 0:
        raise InvalidTopology("g must be non-negative")
    d = _as_fraction(d)
    result = n_gd(CountSpec(max(g, 1), d, mode))
    value = result.value_hi + (1 if g > 1 else 0)
    return BoundReport(
        "slope-count", {"g": g, "d": d, "radius_constant": mode.value}, value,
        "slopes on a cusp of length d bounding a genus g surface: N(1,d) for g<=1, N(g,d)+1 otherwise",
        result.certified)


def intersection_number(s1: Slope, s2: Slope) -> int:
    return abs(s1.p * s2.q - s2.p * s1.q)


def intersection_bound(g1: int, g2: int, area: RealLike,
                       null_homologous: NullHomologous = NullHomologous.NONE,
                       mode: RadiusMode = RadiusMode.TWO_PI,
                       prec: int = DEFAULT_PRECISION,
                       max_prec: int = MAX_PRECISION) -> PreciseReal:
    """4*pi^2*g1*g2/area (36*g1*g2/area with the constant six), doubled for ONE."""
    if g1 < 1 or g2 < 1:
        raise InvalidTopology("g1 and g2 must be at least 1")
    area = PreciseReal.of(area)
    if area.cmp(0, prec, max_prec) is not Ordering.GREATER:
        raise NonpositiveArea("cusp area must be positive")
    if mode is RadiusMode.TWO_PI:
        c = 4 * PreciseReal.pi() * PreciseReal.pi()
    else:
        c = PreciseReal.of(36)
    value = c * (g1 * g2) / area
    return 2 * value if null_homologous is NullHomologous.ONE else value


def boundary_count_bound(g: int, k: RealLike, d: RealLike = 1,
                         mode: RadiusMode = RadiusMode.TWO_PI) -> tuple[Fraction, int]:
    """((2g - 2)/(k - 1), N(k, d)): boundary-component bound and exceptional slopes."""
    if g < 2:
        raise InvalidTopology("g must be at least 2")
    k = _as_fraction(k)
    if k <= 1:
        raise ValueError("k must exceed 1")
    return Fraction(2 * g - 2) / (k - 1), n_gd(CountSpec(k, d, mode)).value_hi


PROVENANCE = {
    "length": "2*pi*(2g-2+n)/n: boundary curve length on a cusp for a surface of genus g with n boundary curves",
    "intersect": "4*pi^2*g1*g2/area(T), or 36*g1*g2/area(T) with constant six; doubled when one surface is null-homologous",
    "count": "#boundary <= (2g-2)/(k-1), with at most N(k,d) exceptional slopes",
}
