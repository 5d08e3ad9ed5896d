"""Certified rational intervals with outward dyadic rounding.

Used only where a normalizing transform needs irrational entries (square
roots of rationals or of Gaussian rationals).  Endpoints are Fractions; after
every operation they are rounded outward to a multiple of ``2**-PREC`` so
sizes stay bounded.
"""

from __future__ import annotations

from fractions import Fraction
from math import floor, ceil, isqrt

from .polycore import RationalComplex, format_rational

PREC = 96  # working bits; results are far tighter than the 2**-64 target
TARGET_WIDTH = Fraction(1, 2**64)
_SCALE = 2**PREC


def _down(q: Fraction) -> Fraction:
    return Fraction(floor(q * _SCALE), _SCALE)


def _up(q: Fraction) -> Fraction:
    return Fraction(ceil(q * _SCALE), _SCALE)


class Interval:
    """Closed interval [lo, hi] of reals with rational endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = Fraction(lo)
        hi = lo if hi is None else Fraction(hi)
        if lo > hi:
            raise ValueError("empty interval")
        self.lo, self.hi = lo, hi

    @classmethod
    def _round(cls, lo, hi) -> "Interval":
        obj = object.__new__(cls)
        obj.lo = lo if lo.denominator == 1 else _down(lo)
        obj.hi = hi if hi.denominator == 1 else _up(hi)
        return obj

    @staticmethod
    def coerce(x) -> "Interval":
        if isinstance(x, Interval):
            return x
        return Interval(x)

    def width(self) -> Fraction:
        return self.hi - self.lo

    def is_exact(self) -> bool:
        return self.lo == self.hi

    def contains(self, x) -> bool:
        return self.lo <= Fraction(x) <= self.hi

    def sign(self):
        """+1, -1, 0 when certain; None when the interval straddles zero."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        return None

    def __add__(self, o):
        if isinstance(o, (RationalComplex, CInterval)):
            return CInterval.coerce(self) + o
        o = Interval.coerce(o)
        return Interval._round(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval._round(-self.hi, -self.lo)

    def __sub__(self, o):
        if isinstance(o, (RationalComplex, CInterval)):
            return CInterval.coerce(self) - o
        return self + (-Interval.coerce(o))

    def __rsub__(self, o):
        return Interval.coerce(o) + (-self)

    def __mul__(self, o):
        if isinstance(o, (RationalComplex, CInterval)):
            return CInterval.coerce(self) * o
        o = Interval.coerce(o)
        prods = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval._round(min(prods), max(prods))

    __rmul__ = __mul__

    def inverse(self) -> "Interval":
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("interval contains zero")
        return Interval._round(1 / self.hi, 1 / self.lo)

    def __truediv__(self, o):
        if isinstance(o, (RationalComplex, CInterval)):
            return CInterval.coerce(self) / o
        return self * Interval.coerce(o).inverse()

    def __rtruediv__(self, o):
        return Interval.coerce(o) * self.inverse()

    def __repr__(self):
        return f"Interval({float(self.lo)!r}, {float(self.hi)!r})"

    def __float__(self):
        return float((self.lo + self.hi) / 2)

    def to_json(self):
        return [format_rational(self.lo), format_rational(self.hi)]


def exact_sqrt(q: Fraction):
    """Return the rational square root of ``q`` if it exists, else None."""
    q = Fraction(q)
    if q < 0:
        return None
    rn, rd = isqrt(q.numerator), isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def sqrt_interval(x) -> Interval:
    """Enclosure of sqrt over a non-negative interval (or rational)."""
    x = Interval.coerce(x)
    if x.hi < 0:
        raise ValueError("square root of a negative interval")
    lo = max(x.lo, Fraction(0))

    def root_down(q):
        r = exact_sqrt(q)
        if r is not None:
            return r
        return Fraction(isqrt(floor(q * _SCALE * _SCALE)), _SCALE)

    def root_up(q):
        r = exact_sqrt(q)
        if r is not None:
            return r
        return Fraction(isqrt(ceil(q * _SCALE * _SCALE)) + 1, _SCALE)

    return Interval(root_down(lo), root_up(x.hi))


class CInterval:
    """Rectangular complex interval re + i*im."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = Interval.coerce(re)
        self.im = Interval.coerce(im)

    @staticmethod
    def coerce(x) -> "CInterval":
        if isinstance(x, CInterval):
            return x
        if isinstance(x, RationalComplex):
            return CInterval(Interval(x.re), Interval(x.im))
        return CInterval(Interval.coerce(x), Interval(0))

    def __add__(self, o):
        o = CInterval.coerce(o)
        return CInterval(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return CInterval(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-CInterval.coerce(o))

    def __rsub__(self, o):
        return CInterval.coerce(o) + (-self)

    def __mul__(self, o):
        o = CInterval.coerce(o)
        return CInterval(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self):
        return CInterval(self.re, -self.im)

    def norm2(self) -> Interval:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "CInterval":
        n = self.norm2()
        return CInterval(self.re / n, -self.im / n)

    def __truediv__(self, o):
        return self * CInterval.coerce(o).inverse()

    def __rtruediv__(self, o):
        return CInterval.coerce(o) * self.inverse()

    def width(self) -> Fraction:
        return max(self.re.width(), self.im.width())

    def contains(self, z) -> bool:
        z = CInterval.coerce(z)
        return self.re.lo <= z.re.lo and z.re.hi <= self.re.hi and self.im.lo <= z.im.lo and z.im.hi <= self.im.hi

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"CInterval({complex(self)!r}, width={float(self.width()):.3g})"

    def to_json(self):
        return {"re": self.re.to_json(), "im": self.im.to_json()}


def csqrt_interval(z) -> CInterval:
    """Principal square root enclosure (re >= 0) of a complex rational or interval.

    For z = a + ib: sqrt = u + iv with u = sqrt((|z|+a)/2), v = sign(b) sqrt((|z|-a)/2).
    Requires that the sign of Im(z) be certain unless Im(z) = 0 exactly.
    """
    z = CInterval.coerce(z)
    mod = sqrt_interval(z.norm2())
    u = sqrt_interval((mod + z.re) * Fraction(1, 2))
    s = z.im.sign()
    if s is None:
        raise ValueError("imaginary part sign undetermined")
    if s == 0:
        if z.re.sign() is not None and z.re.sign() < 0:
            return CInterval(Interval(0), sqrt_interval(-z.re))
        return CInterval(sqrt_interval(z.re), Interval(0))
    v = sqrt_interval((mod - z.re) * Fraction(1, 2))
    return CInterval(u, v if s > 0 else -v)


def gaussian_sqrt(z: RationalComplex):
    """Exact square root in Q(i) if one exists (principal branch), else None."""
    if z.im == 0:
        if z.re >= 0:
            r = exact_sqrt(z.re)
            return None if r is None else RationalComplex(r, 0)
        r = exact_sqrt(-z.re)
        return None if r is None else RationalComplex(0, r)
    mod = exact_sqrt(z.norm2())
    if mod is None:
        return None
    u = exact_sqrt((mod + z.re) / 2)
    v = exact_sqrt((mod - z.re) / 2)
    if u is None or v is None:
        return None
    return RationalComplex(u, v if z.im > 0 else -v)
