"""Maximal primitive lattice-point counts N(g, d).

For ``0 <= x <= 1/2`` the raw count is the number of coprime pairs (a, b)
with ``(a + b*x)**2 + 3*b**2 <= R**2``, where ``R = 2*g*pi/d`` (or ``6*g/d``).
N(g, d) is half the maximum of the raw count over x.

Each point with b > 0 lies in the disk for x in a closed interval [L, U]
(its mirror -v has the same interval), so the maximum is found by sweeping
the interval endpoints that fall in [0, 1/2].  Endpoints are irrational in
general; they are ordered with certified ball arithmetic, and in the
rational-radius mode coincidences are confirmed exactly.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .errors import PrecisionExhausted
from .lattice import IntVector
from .precise import (Ball, Monomial, Ordering, PreciseReal, parse_rational,
                      precision_schedule, simplest_between)

Rational = Union[int, Fraction, str]


class RadiusMode(enum.Enum):
    TWO_PI = "2pi"
    SIX = "6"

    @classmethod
    def parse(cls, text: str) -> "RadiusMode":
        key = text.strip().lower().replace("π", "pi")
        for mode in cls:
            if key == mode.value:
                return mode
        raise ValueError(f"radius constant must be '2pi' or '6', got {text!r}")


def _as_fraction(value: Rational) -> Fraction:
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, float):
        raise TypeError("binary floats are not accepted; pass a decimal string")
    return Fraction(value)


@dataclass(frozen=True)
class CountSpec:
    g: Fraction
    d: Fraction = Fraction(1)
    radius_mode: RadiusMode = RadiusMode.TWO_PI
    precision_bits: int = 64
    max_precision_bits: int = 1024
    open_disk: bool = False

    def __post_init__(self):
        object.__setattr__(self, "g", _as_fraction(self.g))
        object.__setattr__(self, "d", _as_fraction(self.d))
        if self.g < 0:
            raise ValueError("g must be non-negative")
        if self.d < 1:
            raise ValueError("cusp length d must be at least 1")
        if self.precision_bits < 2 or self.max_precision_bits < self.precision_bits:
            raise ValueError("need 2 <= precision_bits <= max_precision_bits")

    @property
    def radius_factor(self) -> Fraction:
        """R**2 = radius_factor * pi**pi_power."""
        c = 2 if self.radius_mode is RadiusMode.TWO_PI else 6
        return (c * self.g / self.d) ** 2

    @property
    def pi_power(self) -> int:
        return 2 if self.radius_mode is RadiusMode.TWO_PI else 0

    def radius_squared(self) -> PreciseReal:
        return PreciseReal.from_monomial(
            Monomial.make(self.radius_factor, 1, self.pi_power))

    def radius(self) -> PreciseReal:
        return self.radius_squared().sqrt()


class _Radius:
    """Certified comparisons of rationals against R**2."""

    def __init__(self, spec: CountSpec):
        self.k = spec.radius_factor
        self.transcendental = spec.pi_power == 2 and self.k != 0
        self.prec = spec.precision_bits
        self.max_prec = spec.max_precision_bits
        self.approx = float(self.k) * (math.pi ** 2 if spec.pi_power else 1.0)
        self._pi2: dict[int, tuple[int, int]] = {}
        self._r2: dict[int, Ball] = {}
        self._s: dict[tuple[int, int], Ball] = {}

    def pi_squared(self, p: int) -> tuple[int, int]:
        """Integer bounds on pi**2 * 2**(2p)."""
        if p not in self._pi2:
            b = Ball.pi(p)
            self._pi2[p] = (b.lo * b.lo, b.hi * b.hi)
        return self._pi2[p]

    def compare(self, num: int, den: int) -> Ordering:
        """num/den versus R**2 (den > 0)."""
        kn, kd = self.k.numerator, self.k.denominator
        if not self.transcendental:
            lhs, rhs = num * kd, den * kn
            return Ordering((lhs > rhs) - (lhs < rhs))
        for p in precision_schedule(self.prec, self.max_prec):
            lo, hi = self.pi_squared(p)
            lhs = (num * kd) << (2 * p)
            if lhs < den * kn * lo:
                return Ordering.LESS
            if lhs > den * kn * hi:
                return Ordering.GREATER
        return Ordering.UNDECIDED

    def r2_ball(self, p: int) -> Ball:
        if p not in self._r2:
            b = Ball.exact(self.k, p)
            if self.transcendental:
                pi = Ball.pi(p)
                b = b * pi * pi
            self._r2[p] = b
        return self._r2[p]

    def s_ball(self, b: int, p: int) -> Ball:
        """Enclosure of sqrt(R**2 - 3 b**2)."""
        key = (b, p)
        if key not in self._s:
            self._s[key] = (self.r2_ball(p) - Ball.exact(3 * b * b, p)).sqrt()
        return self._s[key]

    def s_exact_square(self, b: int) -> Fraction:
        return self.k - 3 * b * b

    def cmp_s(self, b: int, tn: int, td: int) -> Ordering:
        """sqrt(R**2 - 3 b**2) versus the rational tn/td (td > 0)."""
        if tn < 0:
            return Ordering.GREATER
        return self.compare(tn * tn + 3 * b * b * td * td, td * td).flipped()


def _inside_verdict(r: Ordering, open_disk: bool):
    if r is Ordering.UNDECIDED:
        return None
    if r is Ordering.LESS:
        return True
    if r is Ordering.EQUAL:
        return not open_disk
    return False


@lru_cache(maxsize=4096)
def _squarefree_divisors(n: int) -> tuple[tuple[int, int], ...]:
    """(divisor, mobius) for the squarefree divisors of n."""
    primes = []
    m, p = n, 2
    while p * p <= m:
        if m % p == 0:
            primes.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        primes.append(m)
    out = [(1, 1)]
    for q in primes:
        out += [(d * q, -mu) for d, mu in out]
    return tuple(out)


def coprime_in_range(n: int, lo: int, hi: int) -> int:
    """Number of integers a in [lo, hi] with gcd(a, n) == 1 (n >= 1)."""
    if hi < lo:
        return 0
    return sum(mu * (hi // d - (lo - 1) // d) for d, mu in _squarefree_divisors(n))


# ---------------------------------------------------------------------------
# direct evaluation at a rational x


def _edge(inside, start: int, step: int) -> tuple[int, int]:
    """Walk from a point that is not certainly outside; return the last
    possibly-inside and the last certainly-inside positions."""
    a = start
    while inside(a + step) is not False:
        a += step
    possible = a
    while inside(a) is not True and a != start:
        a -= step
    certain = a if inside(a) is True else a - step
    return possible, certain


def count_at(spec: CountSpec, x: Rational) -> int:
    """Raw number of coprime (a, b) with (a + b x)^2 + 3 b^2 <= R^2.

    Raises :class:`PrecisionExhausted` carrying ``lo``/``hi`` bounds when a
    boundary comparison cannot be decided under the precision cap.
    """
    x = _as_fraction(x)
    if not 0 <= x <= Fraction(1, 2):
        raise ValueError("x must lie in [0, 1/2]")
    rad = _Radius(spec)
    xn, xd = x.numerator, x.denominator
    xf = float(x)

    def verdict(a: int, b: int):
        t = a * xd + b * xn
        return _inside_verdict(rad.compare(t * t + 3 * b * b * xd * xd, xd * xd),
                               spec.open_disk)

    lo_total = hi_total = 0
    axis = verdict(1, 0)
    if axis is not False:
        hi_total += 2
        lo_total += 2 if axis else 0
    b = 1
    while True:
        row = _inside_verdict(rad.compare(3 * b * b, 1), spec.open_disk)
        if row is False:
            break

        def inside(a: int, b=b):
            return verdict(a, b)

        centre = -b * xf
        start = None
        for a in sorted({math.floor(centre), math.ceil(centre)}):
            if inside(a) is not False:
                start = a
                break
        if start is not None:
            half = math.sqrt(max(rad.approx - 3 * b * b, 0.0))
            up = max(start, math.floor(centre + half) - 1)
            while up > start and inside(up) is False:
                up -= 1
            down = min(start, math.ceil(centre - half) + 1)
            while down < start and inside(down) is False:
                down += 1
            hi_p, hi_c = _edge(inside, up, 1)
            lo_p, lo_c = _edge(inside, down, -1)
            hi_total += 2 * coprime_in_range(b, lo_p, hi_p)
            lo_total += 2 * coprime_in_range(b, lo_c, hi_c)
        b += 1
    if lo_total != hi_total:
        raise PrecisionExhausted(
            f"count at x={x} undecided at {spec.max_precision_bits} bits",
            lo=lo_total, hi=hi_total)
    return hi_total


# ---------------------------------------------------------------------------
# breakpoint sweep

OPEN, CLOSE, DOMAIN = "open", "close", "domain"


@dataclass(eq=False)
class _Event:
    a: int
    b: int
    sign: int  # -1: lower endpoint L, +1: upper endpoint U
    kind: str
    lo: Fraction = Fraction(0)
    hi: Fraction = Fraction(0)
    fixed: Fraction | None = None  # domain endpoints 0 and 1/2

    def refine(self, rad: _Radius, p: int) -> None:
        if self.fixed is not None:
            self.lo = self.hi = self.fixed
            return
        s = rad.s_ball(self.b, p)
        num = s.scale(self.sign) - Ball.exact(self.a, p)
        lo = Fraction(num.lo // self.b, 1 << p)
        hi = Fraction(-((-num.hi) // self.b), 1 << p)
        if p == rad.prec or self.hi <= self.lo:
            self.lo, self.hi = lo, hi
        else:
            self.lo, self.hi = max(self.lo, lo), min(self.hi, hi)

    def surd(self, rad: _Radius) -> tuple[Fraction, Fraction, Fraction]:
        """(r, t, S) with value r + t*sqrt(S); only meaningful for rational R**2."""
        if self.fixed is not None:
            return self.fixed, Fraction(0), Fraction(0)
        return Fraction(-self.a, self.b), Fraction(self.sign, self.b), rad.s_exact_square(self.b)

    def value(self, spec: CountSpec) -> PreciseReal:
        if self.fixed is not None:
            return PreciseReal.of(self.fixed)
        s = (spec.radius_squared() - 3 * self.b * self.b).sqrt()
        return (self.sign * s - self.a) / self.b


def _sgn(q: Fraction) -> int:
    return (q > 0) - (q < 0)


def surds_equal(x: tuple[Fraction, Fraction, Fraction],
                y: tuple[Fraction, Fraction, Fraction]) -> bool:
    """Exact test of r1 + t1*sqrt(S1) == r2 + t2*sqrt(S2) for rationals, S >= 0."""
    (r1, t1, s1), (r2, t2, s2) = x, y
    u2, v2 = t1 * t1 * s1, t2 * t2 * s2
    su = _sgn(t1) if u2 else 0
    sv = _sgn(t2) if v2 else 0
    r = r2 - r1  # need u - v == r with u = t1 sqrt(S1), v = t2 sqrt(S2)
    if r == 0:
        return u2 == v2 and su == sv
    v = (u2 - v2 - r * r) / (2 * r)
    if v * v != v2 or _sgn(v) != sv:
        return False
    u = v + r
    return u * u == u2 and _sgn(u) == su


@dataclass
class _Group:
    events: list[_Event]
    certain: bool = True

    @property
    def lo(self) -> Fraction:
        return min(e.lo for e in self.events)

    @property
    def hi(self) -> Fraction:
        return max(e.hi for e in self.events)


def _clusters(events: list[_Event]) -> list[list[_Event]]:
    events.sort(key=lambda e: (e.lo, e.hi))
    out: list[list[_Event]] = []
    top = None
    for e in events:
        if out and e.lo <= top:
            out[-1].append(e)
            top = max(top, e.hi)
        else:
            out.append([e])
            top = e.hi
    return out


def _resolve(events: list[_Event], rad: _Radius, p: int, exact: bool) -> list[_Group]:
    for e in events:
        e.refine(rad, p)
    groups: list[_Group] = []
    for cluster in _clusters(events):
        if len(cluster) == 1:
            groups.append(_Group(cluster))
            continue
        if exact:
            first = cluster[0].surd(rad)
            if all(surds_equal(first, e.surd(rad)) for e in cluster[1:]):
                groups.append(_Group(cluster))
                continue
        if p < rad.max_prec:
            groups.extend(_resolve(cluster, rad, min(2 * p, rad.max_prec), exact))
        else:
            groups.append(_Group(cluster, certain=False))
    return groups


@dataclass(frozen=True)
class Breakpoint:
    """A point of [0, 1/2] where some primitive point meets the circle."""

    x: PreciseReal
    enclosure: tuple[Fraction, Fraction]
    entering: tuple[IntVector, ...]
    leaving: tuple[IntVector, ...]
    certain: bool = True

    @property
    def generators(self) -> tuple[IntVector, ...]:
        return self.entering + self.leaving


@dataclass(frozen=True)
class Sample:
    x: PreciseReal
    enclosure: tuple[Fraction, Fraction]
    raw_lo: int
    raw_hi: int
    at_breakpoint: bool


@dataclass(frozen=True)
class Sweep:
    spec: CountSpec
    breakpoints: tuple[Breakpoint, ...]
    samples: tuple[Sample, ...]
    entering: int
    leaving: int

    @property
    def certified(self) -> bool:
        return all(bp.certain for bp in self.breakpoints)


def _collect(spec: CountSpec, rad: _Radius) -> tuple[int, int, list[_Event]]:
    """Points with b > 0: (count alive on all of [0, 1/2], alive just left of 0, events)."""
    constant = alive = 0
    events: list[_Event] = []
    b = 1
    while True:
        row = rad.compare(3 * b * b, 1)
        if row is Ordering.UNDECIDED:
            raise PrecisionExhausted(f"row {b} undecided at {rad.max_prec} bits")
        if row is Ordering.GREATER:
            break

        def cmp_s(tn: int, td: int = 1, b=b) -> Ordering:
            r = rad.cmp_s(b, tn, td)
            if r is Ordering.UNDECIDED:
                raise PrecisionExhausted(f"endpoint in row {b} undecided at {rad.max_prec} bits")
            return r

        s_f = math.sqrt(max(rad.approx - 3 * b * b, 0.0))

        # a in (-s, s - b/2): alive on the whole of [0, 1/2] (L < 0, U > 1/2)
        def left_neg(a: int) -> bool:
            return cmp_s(-a) is Ordering.GREATER

        def right_big(a: int) -> bool:
            return cmp_s(2 * a + b, 2) is Ordering.GREATER

        c_lo = math.floor(-s_f) + 1
        while left_neg(c_lo - 1):
            c_lo -= 1
        while not left_neg(c_lo):
            c_lo += 1
        c_hi = math.floor(s_f - b / 2)
        while right_big(c_hi + 1):
            c_hi += 1
        while not right_big(c_hi):
            c_hi -= 1
        if c_lo <= c_hi:
            constant += coprime_in_range(b, c_lo, c_hi)

        window_lo = math.floor(-s_f - b / 2) - 2
        window_hi = math.ceil(s_f) + 2
        for a in range(window_lo, window_hi + 1):
            if c_lo <= a <= c_hi or math.gcd(a, b) != 1:
                continue
            l_le_half = cmp_s(-2 * a - b, 2) is not Ordering.LESS
            u_ge_0 = cmp_s(a) is not Ordering.LESS
            if not (l_le_half and u_ge_0):
                continue
            l_neg = left_neg(a)
            u_big = right_big(a)
            if l_neg and u_big:
                constant += 1
                continue
            if l_neg:
                alive += 1
            else:
                events.append(_Event(a, b, -1, OPEN))
            if not u_big:
                events.append(_Event(a, b, 1, CLOSE))
        b += 1
    return constant, alive, events


def sweep(spec: CountSpec) -> Sweep:
    """Evaluate the raw count at 0, 1/2, every breakpoint and inside every gap."""
    rad = _Radius(spec)
    closed = not spec.open_disk
    exact = not rad.transcendental
    on_axis = _inside_verdict(rad.compare(1, 1), spec.open_disk)
    if on_axis is None:
        raise PrecisionExhausted("axis point undecided")
    axis = 2 if on_axis else 0
    constant, alive, events = _collect(spec, rad)
    # each event stands for the pair v, -v
    entering = 2 * sum(e.kind == OPEN for e in events)
    leaving = 2 * sum(e.kind == CLOSE for e in events)
    events.append(_Event(0, 0, 0, DOMAIN, fixed=Fraction(0)))
    events.append(_Event(0, 0, 0, DOMAIN, fixed=Fraction(1, 2)))
    groups = _resolve(events, rad, spec.precision_bits, exact)

    breakpoints: list[Breakpoint] = []
    samples: list[Sample] = []
    c = constant + alive
    for i, group in enumerate(groups):
        opens = [e for e in group.events if e.kind == OPEN]
        closes = [e for e in group.events if e.kind == CLOSE]
        anchor = next((e for e in group.events if e.kind == DOMAIN), group.events[0])
        x = anchor.value(spec)
        enclosure = (group.lo, group.hi)
        if closed:
            at = c + len(opens)
            after = at - len(closes)
        else:
            at = c - len(closes)
            after = at + len(opens)
        at_lo = at if group.certain else max(0, c - len(closes))
        at_hi = at if group.certain else c + len(opens)
        samples.append(Sample(x, enclosure, 2 * at_lo + axis, 2 * at_hi + axis,
                              bool(opens or closes)))
        if opens or closes:
            breakpoints.append(Breakpoint(
                x, enclosure,
                tuple(IntVector(e.a, e.b) for e in opens),
                tuple(IntVector(e.a, e.b) for e in closes),
                group.certain))
        c = after
        if i + 1 < len(groups):
            gap = simplest_between(group.hi, groups[i + 1].lo)
            samples.append(Sample(PreciseReal.of(gap), (gap, gap), 2 * c + axis,
                                  2 * c + axis, False))
    return Sweep(spec, tuple(breakpoints), tuple(samples), entering, leaving)


def breakpoints(spec: CountSpec) -> list[Breakpoint]:
    """Sorted points of [0, 1/2] where some coprime (a, b) with b > 0 meets the circle."""
    return list(sweep(spec).breakpoints)


@dataclass(frozen=True)
class CountResult:
    value_lo: int
    value_hi: int
    witness_x: PreciseReal
    breakpoint_count: int
    samples_evaluated: int
    certified: bool
    entering: int = 0
    leaving: int = 0
    half_values: frozenset = field(default_factory=frozenset)

    @property
    def value(self) -> int:
        return self.value_hi


@lru_cache(maxsize=256)
def n_gd(spec: CountSpec) -> CountResult:
    """N(g, d): half the maximal raw count over 0 <= x <= 1/2."""
    sw = sweep(spec)
    best = max(sw.samples, key=lambda s: s.raw_hi)  # first maximum in x order
    lo = max(s.raw_lo for s in sw.samples) // 2
    hi = best.raw_hi // 2
    return CountResult(
        value_lo=lo,
        value_hi=hi,
        witness_x=best.x,
        breakpoint_count=len(sw.breakpoints),
        samples_evaluated=len(sw.samples),
        certified=lo == hi,
        entering=sw.entering,
        leaving=sw.leaving,
        half_values=frozenset(s.raw_hi // 2 for s in sw.samples),
    )


def n_gd_oracle(spec: CountSpec, grid_size: int) -> int:
    """Half the largest raw count on the grid x = k / (2 * grid_size), k = 0..grid_size."""
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    return max(count_at(spec, Fraction(k, 2 * grid_size)) for k in range(grid_size + 1)) // 2


def envelope(g: Rational) -> PreciseReal:
    """4 * sqrt(3) * (g + 1/2)**2 * pi."""
    g = _as_fraction(g)
    if g <= 0:
        raise ValueError("g must be positive")
    return PreciseReal.from_monomial(Monomial.make(4 * (g + Fraction(1, 2)) ** 2, 3, 1))


def coprime_density(radius: int) -> Fraction:
    """Share of coprime pairs among nonzero integer pairs with r^2 + s^2 <= radius^2."""
    if radius < 1:
        raise ValueError("radius must be at least 1")
    total = coprime = 0
    for r in range(-radius, radius + 1):
        m = math.isqrt(radius * radius - r * r)
        total += 2 * m + 1
        if r == 0:
            coprime += 2  # (0, +-1)
        else:
            coprime += coprime_in_range(abs(r), -m, m)
    return Fraction(coprime, total - 1)
