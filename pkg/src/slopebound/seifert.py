"""Boundary equations of horizontal surfaces in framed Seifert fibered spaces.

Everything here is exact rational arithmetic.  A horizontal surface meets the
regular fiber ``u`` times; on boundary torus ``i`` it has curves ``(u_ij, v_ij)``
in the chosen framing, and

* ``sum_j u_ij == u`` on every torus, and
* ``u * sum_k beta_k/alpha_k + sum_ij v_ij/u_ij == 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .errors import Inconsistent, ZeroU


class Curve(NamedTuple):
    u: int
    v: int


@dataclass(frozen=True)
class SeifertPresentation:
    genus: int
    boundary_count: int
    fibers: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "fibers", tuple((int(a), int(b)) for a, b in self.fibers))
        if self.genus < 0:
            raise ValueError("genus must be non-negative")
        if self.boundary_count < 1:
            raise ValueError("need at least one boundary torus")
        for alpha, beta in self.fibers:
            if alpha < 2:
                raise ValueError(f"singular fiber needs alpha >= 2, got {alpha}")
            if math.gcd(alpha, beta) != 1:
                raise ValueError(f"alpha={alpha}, beta={beta} are not coprime")

    @property
    def euler_sum(self) -> Fraction:
        """sum of beta/alpha over the singular fibers."""
        return sum((Fraction(b, a) for a, b in self.fibers), Fraction(0))


@dataclass(frozen=True)
class BoundarySystem:
    tori: tuple[tuple[Curve, ...], ...]
    u_fiber: int

    def __post_init__(self):
        object.__setattr__(self, "tori", tuple(
            tuple(Curve(*c) for c in curves) for curves in self.tori))
        if not self.tori:
            raise ValueError("need at least one boundary torus")

    @classmethod
    def single(cls, curves: Sequence[tuple[int, int]], u_fiber: int) -> "BoundarySystem":
        return cls((tuple(curves),), u_fiber)


def verify_eq21(system: BoundarySystem) -> tuple[bool, ...]:
    """Per torus: do the u-coordinates add up to the (nonzero) fiber intersection?"""
    return tuple(system.u_fiber != 0 and sum(c.u for c in curves) == system.u_fiber
                 for curves in system.tori)


def eq22_value(pres: SeifertPresentation, system: BoundarySystem) -> Fraction:
    """u * sum(beta/alpha) + sum(v/u) over all boundary curves."""
    total = system.u_fiber * pres.euler_sum
    for curves in system.tori:
        for c in curves:
            if c.u == 0:
                raise ZeroU(f"curve {tuple(c)} has u = 0")
            total += Fraction(c.v, c.u)
    return total


def verify_eq22(pres: SeifertPresentation, system: BoundarySystem) -> bool:
    return eq22_value(pres, system) == 0


def solve_slope(pres: SeifertPresentation, u_fiber: int, n_curves: int,
                torus_index: int = 0) -> Curve:
    """Primitive boundary slope (u0, v0), u0 > 0, shared by ``n_curves`` parallel curves.

    With every curve equal to m*(u0, v0) the second equation forces
    v0/u0 = -(u_fiber/n_curves) * sum(beta/alpha).  A zero sum gives (1, 0)
    whatever u and n are.  Otherwise :class:`Inconsistent` is raised when the
    multiplicity m is not an integer.
    """
    if pres.boundary_count != 1:
        raise ValueError("solve_slope handles a single boundary torus")
    if not 0 <= torus_index < pres.boundary_count:
        raise ValueError(f"torus index {torus_index} out of range")
    if u_fiber == 0:
        raise ZeroU("the fiber intersection u must be nonzero")
    if n_curves < 1:
        raise ValueError("n_curves must be at least 1")
    if pres.euler_sum == 0:
        return Curve(1, 0)
    ratio = -Fraction(u_fiber, n_curves) * pres.euler_sum
    u0, v0 = ratio.denominator, ratio.numerator
    if u_fiber % (n_curves * u0):
        raise Inconsistent(
            f"u={u_fiber} cannot split into {n_curves} curves of slope {u0},{v0}")
    return Curve(u0, v0)


def expand(slope: Curve, u_fiber: int, n_curves: int) -> BoundarySystem:
    """The boundary system of ``n_curves`` equal curves of the given slope."""
    m, rest = divmod(u_fiber, n_curves * slope.u)
    if rest:
        raise Inconsistent(f"u={u_fiber} is not a multiple of {n_curves * slope.u}")
    return BoundarySystem.single([Curve(m * slope.u, m * slope.v)] * n_curves, u_fiber)
