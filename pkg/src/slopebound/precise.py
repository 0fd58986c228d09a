"""Certified real arithmetic.

Values are enclosed in midpoint-radius balls whose endpoints are integers
scaled by ``2**-prec``.  A :class:`PreciseReal` is a lazily evaluated real:
it can be re-evaluated at any precision, which is what makes comparisons
escalate until they are decided.

Quantities of the form ``c * sqrt(r) * pi**k`` (``c`` rational) are also
tracked symbolically, so ties such as ``2*pi - 2*pi == 0`` or
``sqrt(3)**2 == 3`` are decided exactly instead of staying undecided.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Callable, Iterator, Union

from mpmath.libmp import mpf_pi, to_fixed

from .errors import PrecisionExhausted

DEFAULT_PRECISION = 64
MAX_PRECISION = 1024

Number = Union[int, Fraction]


class Ordering(enum.Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1
    UNDECIDED = None

    def flipped(self) -> "Ordering":
        if self is Ordering.LESS:
            return Ordering.GREATER
        if self is Ordering.GREATER:
            return Ordering.LESS
        return self


class _Indeterminate(ArithmeticError):
    """A ball operation has no finite enclosure at this precision."""


def precision_schedule(prec: int, max_prec: int) -> Iterator[int]:
    """Doubling precisions from ``prec`` up to and including ``max_prec``."""
    p = max(int(prec), 2)
    while p < max_prec:
        yield p
        p *= 2
    yield max(p if p <= max_prec else max_prec, 2)


def _shift_round(n: int, s: int) -> int:
    return (n + (1 << (s - 1))) >> s


def _ceil_shift(n: int, s: int) -> int:
    return -((-n) >> s)


def _isqrt_ceil(n: int) -> int:
    r = isqrt(n)
    return r if r * r == n else r + 1


@dataclass(frozen=True)
class Ball:
    """The interval ``[(mid - rad) / 2**prec, (mid + rad) / 2**prec]``."""

    mid: int
    rad: int
    prec: int

    @classmethod
    def exact(cls, value: Number, prec: int) -> "Ball":
        q = Fraction(value)
        m, r = divmod(q.numerator << prec, q.denominator)
        if r == 0:
            return cls(m, 0, prec)
        if 2 * r >= q.denominator:
            m += 1
        return cls(m, 1, prec)

    @classmethod
    def from_endpoints(cls, lo: int, hi: int, prec: int) -> "Ball":
        mid = (lo + hi) >> 1
        return cls(mid, hi - mid, prec)

    @classmethod
    def pi(cls, prec: int) -> "Ball":
        lo = to_fixed(mpf_pi(prec + 4, "f"), prec)
        hi = to_fixed(mpf_pi(prec + 4, "c"), prec) + 1
        return cls.from_endpoints(lo, hi, prec)

    @property
    def lo(self) -> int:
        return self.mid - self.rad

    @property
    def hi(self) -> int:
        return self.mid + self.rad

    def lower(self) -> Fraction:
        return Fraction(self.lo, 1 << self.prec)

    def upper(self) -> Fraction:
        return Fraction(self.hi, 1 << self.prec)

    def __neg__(self) -> "Ball":
        return Ball(-self.mid, self.rad, self.prec)

    def __add__(self, other: "Ball") -> "Ball":
        return Ball(self.mid + other.mid, self.rad + other.rad, self.prec)

    def __sub__(self, other: "Ball") -> "Ball":
        return Ball(self.mid - other.mid, self.rad + other.rad, self.prec)

    def __mul__(self, other: "Ball") -> "Ball":
        p = self.prec
        m = self.mid * other.mid
        r = abs(self.mid) * other.rad + self.rad * abs(other.mid) + self.rad * other.rad
        mid = _shift_round(m, p)
        rad = _ceil_shift(r, p)
        if m & ((1 << p) - 1):
            rad += 1
        return Ball(mid, rad, p)

    def scale(self, k: int) -> "Ball":
        return Ball(self.mid * k, self.rad * abs(k), self.prec)

    def inverse(self) -> "Ball":
        lo, hi, p = self.lo, self.hi, self.prec
        if lo <= 0 <= hi:
            raise _Indeterminate
        if hi < 0:
            return -(-self).inverse()
        one = 1 << (2 * p)
        return Ball.from_endpoints(one // hi, -((-one) // lo), p)

    def __truediv__(self, other: "Ball") -> "Ball":
        return self * other.inverse()

    def sqrt(self) -> "Ball":
        """Square root; the lower end is clipped at zero."""
        if self.hi < 0:
            raise ValueError("square root of a negative number")
        p = self.prec
        lo = isqrt(max(self.lo, 0) << p)
        hi = _isqrt_ceil(self.hi << p)
        return Ball.from_endpoints(lo, hi, p)

    def cmp(self, other: "Ball") -> Ordering:
        if self.hi < other.lo:
            return Ordering.LESS
        if self.lo > other.hi:
            return Ordering.GREATER
        if self.rad == 0 and other.rad == 0:
            return Ordering.EQUAL
        return Ordering.UNDECIDED

    def contains(self, q: Number) -> bool:
        return self.lower() <= q <= self.upper()


# ---------------------------------------------------------------------------
# exact monomials c * sqrt(r) * pi**k

_SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]


def _square_split(n: int) -> tuple[int, int]:
    """Write ``n = s*s * f``; ``f`` is squarefree whenever trial division finishes."""
    if n <= 1:
        return 1, n
    s = 1
    f = 1
    p = 2
    limit = 10**5
    while p * p <= n and p <= limit:
        while n % (p * p) == 0:
            n //= p * p
            s *= p
        if n % p == 0:
            n //= p
            f *= p
        p += 1 if p == 2 else 2
    r = isqrt(n)
    if r * r == n:
        return s * r, f
    return s, f * n


@dataclass(frozen=True)
class Monomial:
    coeff: Fraction
    radicand: int = 1
    pi_power: int = 0

    @classmethod
    def make(cls, coeff: Number, radicand: Number = 1, pi_power: int = 0) -> "Monomial":
        c = Fraction(coeff)
        r = Fraction(radicand)
        if r < 0:
            raise ValueError("negative radicand")
        if c == 0 or r == 0:
            return cls(Fraction(0))
        # sqrt(n/m) = sqrt(n*m)/m
        s, f = _square_split(r.numerator * r.denominator)
        return cls(c * s / r.denominator, f, pi_power)

    @property
    def is_zero(self) -> bool:
        return self.coeff == 0

    def sign(self) -> int:
        return (self.coeff > 0) - (self.coeff < 0)

    def rational(self) -> Fraction | None:
        if self.is_zero or (self.radicand == 1 and self.pi_power == 0):
            return self.coeff
        return None

    def __neg__(self) -> "Monomial":
        return Monomial(-self.coeff, self.radicand, self.pi_power)

    def add(self, other: "Monomial") -> "Monomial | None":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if (self.radicand, self.pi_power) != (other.radicand, other.pi_power):
            return None
        return Monomial.make(self.coeff + other.coeff, self.radicand, self.pi_power)

    def mul(self, other: "Monomial") -> "Monomial":
        if self.is_zero or other.is_zero:
            return Monomial(Fraction(0))
        return Monomial.make(self.coeff * other.coeff, self.radicand * other.radicand,
                             self.pi_power + other.pi_power)

    def div(self, other: "Monomial") -> "Monomial":
        if other.is_zero:
            raise ZeroDivisionError("division by exact zero")
        if self.is_zero:
            return self
        return Monomial.make(self.coeff / (other.coeff * other.radicand),
                             self.radicand * other.radicand,
                             self.pi_power - other.pi_power)

    def sqrt(self) -> "Monomial | None":
        if self.coeff < 0:
            raise ValueError("square root of a negative number")
        if self.is_zero:
            return self
        if self.radicand != 1 or self.pi_power % 2:
            return None
        return Monomial.make(1, self.coeff, self.pi_power // 2)

    def compare(self, other: "Monomial") -> Ordering | None:
        s1, s2 = self.sign(), other.sign()
        if s1 != s2 or s1 == 0:
            return Ordering((s1 > s2) - (s1 < s2))
        if self.pi_power != other.pi_power:
            return None
        a = self.coeff ** 2 * self.radicand
        b = other.coeff ** 2 * other.radicand
        c = (a > b) - (a < b)
        return Ordering(c * s1)

    def ball(self, prec: int) -> Ball:
        b = Ball.exact(self.coeff, prec)
        if self.radicand != 1:
            b = b * Ball.exact(self.radicand, prec).sqrt()
        if self.pi_power:
            pi = Ball.pi(prec)
            if self.pi_power < 0:
                pi = pi.inverse()
            for _ in range(abs(self.pi_power)):
                b = b * pi
        return b

    def __str__(self) -> str:
        parts = []
        if self.coeff != 1 or (self.radicand == 1 and self.pi_power == 0):
            parts.append(str(self.coeff))
        if self.radicand != 1:
            parts.append(f"sqrt({self.radicand})")
        if self.pi_power == 1:
            parts.append("pi")
        elif self.pi_power:
            parts.append(f"pi^{self.pi_power}")
        return "*".join(parts)


# ---------------------------------------------------------------------------


class PreciseReal:
    """A real number that can be enclosed at any requested precision."""

    __slots__ = ("_evaluate", "exact", "_balls")

    def __init__(self, evaluate: Callable[[int], Ball], exact: Monomial | None = None):
        self._evaluate = evaluate
        self.exact = exact
        self._balls: dict[int, Ball] = {}

    # construction ---------------------------------------------------------
    @classmethod
    def from_monomial(cls, m: Monomial) -> "PreciseReal":
        return cls(m.ball, m)

    @classmethod
    def of(cls, value: "RealLike") -> "PreciseReal":
        if isinstance(value, PreciseReal):
            return value
        if isinstance(value, str):
            return parse_real(value)
        if isinstance(value, float):
            raise TypeError("binary floats are not accepted; pass a decimal string")
        return cls.from_monomial(Monomial.make(Fraction(value)))

    @classmethod
    def pi(cls) -> "PreciseReal":
        return cls.from_monomial(Monomial.make(1, 1, 1))

    @classmethod
    def sqrt_of(cls, value: Number) -> "PreciseReal":
        return cls.from_monomial(Monomial.make(1, value))

    # evaluation -----------------------------------------------------------
    def ball(self, prec: int) -> Ball:
        b = self._balls.get(prec)
        if b is None:
            b = self._evaluate(prec)
            self._balls[prec] = b
        return b

    def enclosure(self, prec: int = DEFAULT_PRECISION) -> tuple[Fraction, Fraction]:
        b = self.ball(prec)
        return b.lower(), b.upper()

    def rational(self) -> Fraction | None:
        return self.exact.rational() if self.exact is not None else None

    def __float__(self) -> float:
        return float(Fraction(self.ball(80).mid, 1 << 80))

    def to_decimal(self, digits: int = 15) -> str:
        """Midpoint rounded to ``digits`` significant digits (display only)."""
        q = self.rational()
        if q is None:
            prec = int(digits * 3.33) + 40
            b = self.ball(prec)
            q = Fraction(b.mid, 1 << prec)
        return _format_decimal(q, digits)

    def __repr__(self) -> str:
        if self.exact is not None:
            return f"PreciseReal({self.exact})"
        return f"PreciseReal(~{self.to_decimal(12)})"

    # arithmetic -----------------------------------------------------------
    def _binary(self, other: "RealLike", op: Callable[[Ball, Ball], Ball],
                exact_op: Callable[[Monomial, Monomial], Monomial | None]) -> "PreciseReal":
        other = PreciseReal.of(other)
        exact = None
        if self.exact is not None and other.exact is not None:
            exact = exact_op(self.exact, other.exact)
        if exact is not None:
            return PreciseReal.from_monomial(exact)
        a, b = self, other
        return PreciseReal(lambda p: op(a.ball(p), b.ball(p)))

    def _is_zero(self) -> bool:
        return self.exact is not None and self.exact.is_zero

    def __add__(self, other: "RealLike") -> "PreciseReal":
        other = PreciseReal.of(other)
        if other._is_zero():
            return self
        if self._is_zero():
            return other
        return self._binary(other, Ball.__add__, Monomial.add)

    def __radd__(self, other: "RealLike") -> "PreciseReal":
        return PreciseReal.of(other) + self

    def __sub__(self, other: "RealLike") -> "PreciseReal":
        other = PreciseReal.of(other)
        if other._is_zero():
            return self
        if self._is_zero():
            return -other
        return self._binary(other, Ball.__sub__, lambda x, y: x.add(-y))

    def __rsub__(self, other: "RealLike") -> "PreciseReal":
        return PreciseReal.of(other) - self

    def __mul__(self, other: "RealLike") -> "PreciseReal":
        other = PreciseReal.of(other)
        if self._is_zero():
            return self
        if other._is_zero():
            return other
        return self._binary(other, Ball.__mul__, Monomial.mul)

    def __rmul__(self, other: "RealLike") -> "PreciseReal":
        return PreciseReal.of(other) * self

    def __truediv__(self, other: "RealLike") -> "PreciseReal":
        return self._binary(other, Ball.__truediv__, Monomial.div)

    def __rtruediv__(self, other: "RealLike") -> "PreciseReal":
        return PreciseReal.of(other) / self

    def __neg__(self) -> "PreciseReal":
        if self.exact is not None:
            return PreciseReal.from_monomial(-self.exact)
        a = self
        return PreciseReal(lambda p: -a.ball(p))

    def sqrt(self) -> "PreciseReal":
        if self.exact is not None:
            root = self.exact.sqrt()
            if root is not None:
                return PreciseReal.from_monomial(root)
        a = self
        return PreciseReal(lambda p: a.ball(p).sqrt())

    def square(self) -> "PreciseReal":
        return self * self

    # comparison -----------------------------------------------------------
    def cmp(self, other: "RealLike", prec: int = DEFAULT_PRECISION,
            max_prec: int = MAX_PRECISION) -> Ordering:
        other = PreciseReal.of(other)
        if self.exact is not None and other.exact is not None:
            known = self.exact.compare(other.exact)
            if known is not None:
                return known
        for p in precision_schedule(prec, max_prec):
            try:
                result = self.ball(p).cmp(other.ball(p))
            except _Indeterminate:
                continue
            if result is not Ordering.UNDECIDED:
                return result
        return Ordering.UNDECIDED

    def decide(self, other: "RealLike", prec: int = DEFAULT_PRECISION,
               max_prec: int = MAX_PRECISION) -> Ordering:
        """Like :meth:`cmp` but raises when the comparison stays open."""
        result = self.cmp(other, prec, max_prec)
        if result is Ordering.UNDECIDED:
            raise PrecisionExhausted(f"comparison undecided at {max_prec} bits")
        return result

    def sign(self, prec: int = DEFAULT_PRECISION, max_prec: int = MAX_PRECISION) -> Ordering:
        return self.cmp(0, prec, max_prec)


RealLike = Union[PreciseReal, int, Fraction, str]


def _format_decimal(q: Fraction, digits: int) -> str:
    if q == 0:
        return "0"
    sign = "-" if q < 0 else ""
    q = abs(q)
    # exponent such that 10**(e-1) <= q < 10**e
    e = len(str(q.numerator)) - len(str(q.denominator))
    if Fraction(10) ** e <= q:
        e += 1
    elif Fraction(10) ** (e - 1) > q:
        e -= 1
    shift = digits - e
    scaled = q * Fraction(10) ** shift
    n = (scaled.numerator * 2 + scaled.denominator) // (2 * scaled.denominator)
    if len(str(n)) > digits:  # rounding carried into a new digit
        n //= 10
        shift -= 1
    s = str(n)
    if shift <= 0:
        return sign + s + "0" * (-shift)
    if shift >= len(s):
        s = "0" * (shift - len(s) + 1) + s
    body = (s[:-shift] + "." + s[-shift:]).rstrip("0").rstrip(".")
    return sign + body


_FACTOR = re.compile(
    r"^(?P<num>\d+(?:\.\d*)?(?:[eE][-+]?\d+)?(?:/\d+)?|\.\d+(?:[eE][-+]?\d+)?)?"
    r"(?P<sym>pi|sqrt(?P<rad>\d+)|sqrt\((?P<radx>[^()]+)\))?$")


def parse_real(text: str) -> PreciseReal:
    """Parse exact decimal input.

    Accepts products of decimals/fractions, ``pi``, ``sqrtN`` and
    ``sqrt(q)`` separated by ``*``, with an optional leading sign, e.g.
    ``1.15094``, ``-sqrt3``, ``0.5*sqrt3``, ``2pi``, ``3/2``.
    """
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty number")
    negative = s[0] == "-"
    if s[0] in "+-":
        s = s[1:]
    value = Monomial.make(1)
    for factor in s.split("*"):
        m = _FACTOR.match(factor)
        if not factor or m is None or not (m.group("num") or m.group("sym")):
            raise ValueError(f"cannot parse number {text!r}")
        if m.group("num"):
            value = value.mul(Monomial.make(Fraction(m.group("num"))))
        sym = m.group("sym")
        if sym == "pi":
            value = value.mul(Monomial.make(1, 1, 1))
        elif sym:
            rad = m.group("rad") or m.group("radx")
            value = value.mul(Monomial.make(1, Fraction(rad)))
    return PreciseReal.from_monomial(-value if negative else value)


def parse_rational(text: str) -> Fraction:
    """Exact rational from a decimal or ``a/b`` string."""
    value = parse_real(text).rational()
    if value is None:
        raise ValueError(f"{text!r} is not a rational number")
    return value


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """The rational with the smallest denominator in the open interval (lo, hi)."""
    if not lo < hi:
        raise ValueError("empty interval")
    # Stern-Brocot descent on continued fractions
    fl = lo.numerator // lo.denominator
    if fl + 1 < hi:
        return Fraction(fl + 1)
    frac_lo = lo - fl
    frac_hi = hi - fl
    if frac_lo == 0:
        # need a number in (0, frac_hi)
        n = 1
        while Fraction(1, n) >= frac_hi:
            n += 1
        return fl + Fraction(1, n)
    inner = simplest_between(1 / frac_hi, 1 / frac_lo)
    return fl + 1 / inner
