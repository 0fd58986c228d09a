"""Plane lattices: Gauss reduction, normal form and short-vector enumeration."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .errors import DegenerateBasis, PrecisionExhausted, ZeroVector
from .precise import (DEFAULT_PRECISION, MAX_PRECISION, Ordering, PreciseReal,
                      RealLike, parse_real)

Matrix = tuple[tuple[int, int], tuple[int, int]]
Vector = tuple[PreciseReal, PreciseReal]


class IntVector(NamedTuple):
    a: int
    b: int


def is_primitive(v: tuple[int, int]) -> bool:
    """True iff gcd(|a|, |b|) == 1, with gcd(n, 0) = |n|."""
    a, b = v
    if a == 0 and b == 0:
        raise ZeroVector("the zero vector has no primitivity")
    return math.gcd(a, b) == 1


@dataclass(frozen=True)
class LatticeBasis:
    e1: Vector
    e2: Vector

    @classmethod
    def of(cls, e1: tuple[RealLike, RealLike], e2: tuple[RealLike, RealLike]) -> "LatticeBasis":
        return cls(tuple(PreciseReal.of(c) for c in e1), tuple(PreciseReal.of(c) for c in e2))

    @classmethod
    def parse(cls, text: str) -> "LatticeBasis":
        """Parse ``"x1,y1;x2,y2"``; components use :func:`parse_real` syntax."""
        try:
            v1, v2 = text.split(";")
            x1, y1 = v1.split(",")
            x2, y2 = v2.split(",")
        except ValueError:
            raise ValueError(f"basis must look like 'x1,y1;x2,y2', got {text!r}") from None
        return cls((parse_real(x1), parse_real(y1)), (parse_real(x2), parse_real(y2)))

    def gram(self) -> tuple[PreciseReal, PreciseReal, PreciseReal]:
        (x1, y1), (x2, y2) = self.e1, self.e2
        return x1 * x1 + y1 * y1, x1 * x2 + y1 * y2, x2 * x2 + y2 * y2

    def det(self) -> PreciseReal:
        (x1, y1), (x2, y2) = self.e1, self.e2
        return x1 * y2 - x2 * y1

    def combine(self, m: int, n: int) -> Vector:
        """The lattice vector m*e1 + n*e2."""
        (x1, y1), (x2, y2) = self.e1, self.e2
        return (m * x1 + n * x2, m * y1 + n * y2)

    def transform(self, u: Matrix) -> "LatticeBasis":
        return LatticeBasis(self.combine(*u[0]), self.combine(*u[1]))


@dataclass(frozen=True)
class NormalizedBasis:
    """Lattice spanned by d*(1, 0) and d*(x, y), stored through d^2, x and y^2.

    Only squares of ``d`` and ``y`` enter lattice norms, so keeping them
    squared preserves exactness for inputs such as ``y = sqrt3``.
    """

    d2: PreciseReal
    x: PreciseReal
    y2: PreciseReal

    @classmethod
    def of(cls, d: RealLike, x: RealLike, y: RealLike) -> "NormalizedBasis":
        d, y = PreciseReal.of(d), PreciseReal.of(y)
        return cls(d * d, PreciseReal.of(x), y * y)

    @property
    def d(self) -> PreciseReal:
        return self.d2.sqrt()

    @property
    def y(self) -> PreciseReal:
        return self.y2.sqrt()

    def area(self) -> PreciseReal:
        return self.d2 * self.y

    def norm2(self, a: int, b: int) -> PreciseReal:
        """Squared length of a*e1' + b*e2'."""
        t = a + b * self.x
        return self.d2 * (t * t + b * b * self.y2)


def _gram_under(g: tuple[PreciseReal, PreciseReal, PreciseReal], u: Matrix):
    g11, g12, g22 = g
    (a, b), (c, d) = u
    n11 = a * a * g11 + 2 * a * b * g12 + b * b * g22
    n12 = a * c * g11 + (a * d + b * c) * g12 + b * d * g22
    n22 = c * c * g11 + 2 * c * d * g12 + d * d * g22
    return n11, n12, n22


def _decided(a: PreciseReal, b: RealLike, prec: int, max_prec: int, what: str) -> Ordering:
    r = a.cmp(b, prec, max_prec)
    if r is Ordering.UNDECIDED:
        raise PrecisionExhausted(f"{what} undecided at {max_prec} bits")
    return r


def reduce_with_transform(basis: LatticeBasis, prec: int = DEFAULT_PRECISION,
                          max_prec: int = MAX_PRECISION) -> tuple[LatticeBasis, Matrix]:
    """Gauss-Lagrange reduction.

    Returns the reduced basis and the unimodular integer matrix ``U`` whose
    rows express the new vectors in the input basis.  The output satisfies
    ``|e1| <= |e2| <= |e1 - e2| <= |e1 + e2|``, i.e. ``0 <= e1.e2 <= |e1|^2 / 2``.
    """
    det = basis.det()
    if det.cmp(0, prec, max_prec) in (Ordering.EQUAL, Ordering.UNDECIDED):
        raise DegenerateBasis("basis vectors are linearly dependent")
    gram = basis.gram()
    u = ((1, 0), (0, 1))
    for _ in range(10_000):
        g11, g12, g22 = _gram_under(gram, u)
        if _decided(g22, g11, prec, max_prec, "norm comparison") is Ordering.LESS:
            u = (u[1], u[0])
            continue
        mu = g12 / g11
        m = round(Fraction(mu.ball(prec).mid, 1 << prec))
        if m:
            u = (u[0], (u[1][0] - m * u[0][0], u[1][1] - m * u[0][1]))
            g11, g12, g22 = _gram_under(gram, u)
            if _decided(g22, g11, prec, max_prec, "norm comparison") is Ordering.LESS:
                u = (u[1], u[0])
                continue
        # rounding from a low-precision midpoint can be off by one near half-integers
        if _decided(2 * g12, g11, prec, max_prec, "size reduction") is Ordering.GREATER:
            continue
        if _decided(-2 * g12, g11, prec, max_prec, "size reduction") is Ordering.GREATER:
            continue
        break
    else:  # pragma: no cover - Gauss reduction terminates
        raise RuntimeError("reduction did not terminate")
    g11, g12, g22 = _gram_under(gram, u)
    if _decided(g12, 0, prec, max_prec, "angle sign") is Ordering.LESS:
        u = (u[0], (-u[1][0], -u[1][1]))
    return basis.transform(u), u


def reduce(basis: LatticeBasis, prec: int = DEFAULT_PRECISION,
           max_prec: int = MAX_PRECISION) -> LatticeBasis:
    return reduce_with_transform(basis, prec, max_prec)[0]


def normalize(basis: LatticeBasis, prec: int = DEFAULT_PRECISION,
              max_prec: int = MAX_PRECISION) -> NormalizedBasis:
    """Normal form (d, x, y) of the lattice up to rotation and reflection.

    The basis is reduced first, so any basis of the lattice may be passed.
    """
    reduced = reduce(basis, prec, max_prec)
    g11, g12, _ = reduced.gram()
    det = reduced.det()
    return NormalizedBasis(g11, g12 / g11, det * det / (g11 * g11))


def _row_edge(inside, start: int, step: int) -> int:
    """Last ``a`` from ``start`` in direction ``step`` not certainly outside."""
    a = start
    while inside(a + step) is not False:
        a += step
    return a


def enumerate_short(basis: NormalizedBasis, lmax: RealLike, primitive_only: bool = True,
                    prec: int = DEFAULT_PRECISION,
                    max_prec: int = MAX_PRECISION) -> list[IntVector]:
    """All nonzero (a, b) with |a*e1' + b*e2'| <= lmax, sorted by (b, a)."""
    lmax = PreciseReal.of(lmax)
    if lmax.cmp(0, prec, max_prec) is not Ordering.GREATER:
        raise ValueError("lmax must be positive")
    bound = lmax * lmax
    x_f, y2_f, d2_f, bound_f = (float(v) for v in (basis.x, basis.y2, basis.d2, bound))
    rmax = bound_f / d2_f
    bmax = int(math.sqrt(rmax / y2_f)) + 1

    def membership(a: int, b: int):
        """True / False, or None when only a tie can explain the overlap."""
        r = basis.norm2(a, b).cmp(bound, prec, max_prec)
        if r is Ordering.UNDECIDED:
            return None
        return r is not Ordering.GREATER

    out: list[IntVector] = []
    for b in range(-bmax, bmax + 1):
        def inside(a: int, b=b):
            return membership(a, b)

        centre = -b * x_f
        half = math.sqrt(max(rmax - b * b * y2_f, 0.0))
        # start from an integer nearest the row centre; rows may be empty
        start = None
        for a in sorted({math.floor(centre), math.ceil(centre)}):
            if inside(a) is not False:
                start = a
                break
        if start is None:
            continue
        hi = _row_edge(inside, max(start, math.floor(centre + half) - 1), 1)
        while hi > start and inside(hi) is False:
            hi -= 1
        lo = _row_edge(inside, min(start, math.ceil(centre - half) + 1), -1)
        while lo < start and inside(lo) is False:
            lo += 1
        for a in range(lo, hi + 1):
            if a == 0 and b == 0:
                continue
            if primitive_only and math.gcd(a, b) != 1:
                continue
            if a in (lo, hi) and inside(a) is None:
                raise PrecisionExhausted(
                    f"membership of ({a}, {b}) undecided at {max_prec} bits")
            out.append(IntVector(a, b))
    return out
