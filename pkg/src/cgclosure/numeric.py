"""Exact scalars: rationals (``Fraction``) and elements of a real quadratic field.

A scalar is either an ``int``/``Fraction`` or a :class:`QuadExt` ``a + b*sqrt(m)``.
Arithmetic on ``QuadExt`` collapses back to ``Fraction`` whenever the irrational
part vanishes, so rational data never pays for the extension.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Union

from .errors import AmbiguousFloor, FieldMismatch, InputError

DEFAULT_FIELD = 2


def _squarefree(m: int) -> bool:
    if m < 2:
        return False
    d = 2
    while d * d <= m:
        if m % (d * d) == 0:
            return False
        d += 1
    return True


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not a rational: {x!r}")


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


class QuadExt:
    """``rat + irr*sqrt(m)`` with rational parts and squarefree ``m >= 2``."""

    __slots__ = ("rat", "irr", "m")

    def __init__(self, rat=0, irr=0, m: int = DEFAULT_FIELD):
        if not _squarefree(m):
            raise InputError(f"field index must be squarefree and >= 2, got {m}")
        self.rat = _frac(rat)
        self.irr = _frac(irr)
        self.m = m

    # construction helpers -------------------------------------------------
    @staticmethod
    def sqrt(m: int = DEFAULT_FIELD) -> "QuadExt":
        return QuadExt(0, 1, m)

    def _coerce(self, other):
        if isinstance(other, QuadExt):
            if other.m != self.m and self.irr and other.irr:
                raise FieldMismatch(f"Q(sqrt {self.m}) vs Q(sqrt {other.m})")
            m = self.m if self.irr else other.m
            return other.rat, other.irr, m
        if isinstance(other, (int, Fraction)):
            return Fraction(other), Fraction(0), self.m
        return None

    @staticmethod
    def make(rat, irr, m):
        if irr == 0:
            return rat
        q = QuadExt.__new__(QuadExt)
        q.rat, q.irr, q.m = rat, irr, m
        return q

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return QuadExt.make(self.rat + c[0], self.irr + c[1], c[2])

    __radd__ = __add__

    def __sub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return QuadExt.make(self.rat - c[0], self.irr - c[1], c[2])

    def __rsub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return QuadExt.make(c[0] - self.rat, c[1] - self.irr, c[2])

    def __mul__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        a, b, m = self.rat, self.irr, c[2]
        x, y = c[0], c[1]
        return QuadExt.make(a * x + b * y * m, a * y + b * x, m)

    __rmul__ = __mul__

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("QuadExt division by zero")
        return QuadExt.make(self.rat / n, -self.irr / n, self.m)

    def __truediv__(self, other):
        if isinstance(other, QuadExt):
            self._coerce(other)
            return self * other.inverse()
        if isinstance(other, (int, Fraction)):
            return QuadExt.make(self.rat / other, self.irr / other, self.m)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = Fraction(1)
        base = self
        while k:
            if k & 1:
                out = base * out
            base = base * base
            k >>= 1
        return out

    def __neg__(self):
        return QuadExt.make(-self.rat, -self.irr, self.m)

    def __pos__(self):
        return self

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def conjugate(self):
        return QuadExt.make(self.rat, -self.irr, self.m)

    def norm(self) -> Fraction:
        """Field norm ``rat^2 - m*irr^2`` (rational)."""
        return self.rat * self.rat - self.irr * self.irr * self.m

    # order ----------------------------------------------------------------
    def sign(self) -> int:
        a, b = self.rat, self.irr
        if b == 0:
            return _sgn(a)
        if a == 0 or _sgn(a) == _sgn(b):
            return _sgn(b) if a == 0 else _sgn(a)
        # opposite signs: the larger magnitude wins; a^2 != m b^2 as m is squarefree
        return _sgn(a) if a * a > b * b * self.m else _sgn(b)

    def _cmp(self, other):
        c = self._coerce(other)
        if c is None:
            return None
        return QuadExt._sign_of(self.rat - c[0], self.irr - c[1], c[2])

    @staticmethod
    def _sign_of(a, b, m):
        if b == 0:
            return _sgn(a)
        if a == 0 or _sgn(a) == _sgn(b):
            return _sgn(b) if a == 0 else _sgn(a)
        return _sgn(a) if a * a > b * b * m else _sgn(b)

    def __eq__(self, other):
        if isinstance(other, QuadExt):
            return self.rat == other.rat and self.irr == other.irr and (
                self.irr == 0 or self.m == other.m
            )
        if isinstance(other, (int, Fraction)):
            return self.irr == 0 and self.rat == other
        return NotImplemented

    def __hash__(self):
        if self.irr == 0:
            return hash(self.rat)
        return hash((self.rat, self.irr, self.m))

    def __lt__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s < 0

    def __le__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s <= 0

    def __gt__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s > 0

    def __ge__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s >= 0

    def __bool__(self):
        return bool(self.rat) or bool(self.irr)

    # rounding -------------------------------------------------------------
    def __floor__(self) -> int:
        return floor_quad(self)

    def __ceil__(self) -> int:
        return -floor_quad(-self)

    def __float__(self):
        lo, hi = bounds(self, 64)
        return float((lo + hi) / 2)

    def __repr__(self):
        return f"QuadExt({self.rat}, {self.irr}, m={self.m})"

    def __str__(self):
        return f"{self.rat}+{self.irr}*sqrt({self.m})"


Scalar = Union[int, Fraction, QuadExt]


def is_rational(x: Scalar) -> bool:
    return not isinstance(x, QuadExt) or x.irr == 0


def field_of(x: Scalar):
    if isinstance(x, QuadExt) and x.irr != 0:
        return x.m
    return None


def exact(x) -> Scalar:
    """Coerce ints to Fraction; reject floats."""
    if isinstance(x, (Fraction, QuadExt)):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    raise InputError(f"not an exact scalar: {x!r}")


def exact_vector(v) -> tuple:
    return tuple(exact(x) for x in v)


def sign(x: Scalar) -> int:
    if isinstance(x, QuadExt):
        return x.sign()
    return _sgn(x)


def _floor_sqrt_scaled(b: Fraction, m: int) -> int:
    """floor(b*sqrt(m)) for rational b."""
    if b >= 0:
        x = b * b * m
        return math.isqrt(x.numerator // x.denominator)
    # m squarefree, so |b| sqrt(m) is irrational and never an integer
    x = b * b * m
    return -(math.isqrt(x.numerator // x.denominator) + 1)


def sign_qi(a: int, b: int, m: int) -> int:
    """Sign of a + b*sqrt(m) for integers a, b."""
    if a >= 0 and b >= 0:
        return int(a > 0 or b > 0)
    if a <= 0 and b <= 0:
        return -1
    d = a * a - b * b * m
    return (1 if a > 0 else -1) * (1 if d > 0 else -1 if d < 0 else 0)


def floor_qi(a: int, b: int, m: int, d: int = 1) -> int:
    """floor((a + b*sqrt(m)) / d) for integers, d > 0 and m squarefree."""
    if b >= 0:
        f = math.isqrt(b * b * m)
    else:
        f = -math.isqrt(b * b * m) - 1
    return (a + f) // d


def floor_quad(x: Scalar) -> int:
    """Exact floor of a rational or a quadratic irrational."""
    if not isinstance(x, QuadExt):
        return math.floor(x)
    if x.irr == 0:
        return math.floor(x.rat)
    g = math.floor(x.rat) + _floor_sqrt_scaled(x.irr, x.m)
    # g <= floor(x) <= g + 1
    while QuadExt._sign_of(x.rat - g - 1, x.irr, x.m) >= 0:
        g += 1
    while QuadExt._sign_of(x.rat - g, x.irr, x.m) < 0:
        g -= 1
    return g


def ceil_quad(x: Scalar) -> int:
    return -floor_quad(-x)


def compare_quad(x: Scalar, y: Scalar) -> int:
    """Exact trichotomy: -1, 0 or 1."""
    return sign(x - y)


def to_fraction(x: Scalar) -> Fraction:
    if isinstance(x, QuadExt):
        if x.irr:
            raise InputError(f"{x} is irrational")
        return x.rat
    return Fraction(x)


# -- rational enclosures -----------------------------------------------------

def sqrt_bounds(x: Fraction, bits: int = 64):
    """Rational ``(lo, hi)`` with ``lo <= sqrt(x) <= hi``; equal when x is a square."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("sqrt of negative")
    p, q = x.numerator, x.denominator
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp == p and rq * rq == q:
        r = Fraction(rp, rq)
        return r, r
    scale = 1 << bits
    s = math.isqrt((p * scale * scale) // q)
    return Fraction(s, scale), Fraction(s + 1, scale)


def sqrt_upper(x: Fraction, bits: int = 64) -> Fraction:
    return sqrt_bounds(x, bits)[1]


def sqrt_lower(x: Fraction, bits: int = 64) -> Fraction:
    return sqrt_bounds(x, bits)[0]


def bounds(x: Scalar, bits: int = 64):
    """Rational enclosure ``(lo, hi)`` of a scalar."""
    if not isinstance(x, QuadExt):
        f = Fraction(x)
        return f, f
    if x.irr == 0:
        return x.rat, x.rat
    lo, hi = sqrt_bounds(Fraction(x.m), bits)
    if x.irr > 0:
        return x.rat + x.irr * lo, x.rat + x.irr * hi
    return x.rat + x.irr * hi, x.rat + x.irr * lo


def lower(x: Scalar, bits: int = 64) -> Fraction:
    return bounds(x, bits)[0]


def upper(x: Scalar, bits: int = 64) -> Fraction:
    return bounds(x, bits)[1]


def to_float(x: Scalar) -> float:
    return float(x)


# -- certified intervals -----------------------------------------------------

@dataclass(frozen=True)
class CertifiedInterval:
    lo: Fraction
    hi: Fraction
    refinable: bool = True

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty interval")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi


def floor_interval(iv: CertifiedInterval, refine: Callable | None = None, budget: int = 256) -> int:
    """Floor of the value enclosed by ``iv``, refining until no integer is ambiguous."""
    for _ in range(budget + 1):
        f = math.floor(iv.lo)
        if f == math.floor(iv.hi):
            return f
        if refine is None or not iv.refinable:
            break
        iv = refine(iv)
    raise AmbiguousFloor(f"integer inside ({iv.lo}, {iv.hi}] after {budget} refinements")


def sqrt_interval(x: Fraction, offset: Fraction = Fraction(0), bits: int = 8):
    """Interval for ``offset + sqrt(x)`` plus a refiner that doubles the precision."""
    x = Fraction(x)
    offset = Fraction(offset)
    state = {"bits": bits}

    def make(b):
        lo, hi = sqrt_bounds(x, b)
        return CertifiedInterval(offset + lo, offset + hi, refinable=lo != hi)

    def refine(_iv):
        state["bits"] *= 2
        return make(state["bits"])

    return make(bits), refine


# -- serialization -----------------------------------------------------------

def rational_to_json(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def scalar_to_json(x: Scalar):
    if isinstance(x, QuadExt) and x.irr != 0:
        return [rational_to_json(x.rat), rational_to_json(x.irr)]
    return rational_to_json(to_fraction(x))


def scalar_from_json(obj, m: int = DEFAULT_FIELD) -> Scalar:
    if isinstance(obj, list):
        if len(obj) != 2:
            raise InputError(f"QuadExt must be a pair, got {obj!r}")
        q = QuadExt(_parse_rational(obj[0]), _parse_rational(obj[1]), m)
        return QuadExt.make(q.rat, q.irr, m)
    return _parse_rational(obj)


def _parse_rational(obj) -> Fraction:
    if isinstance(obj, bool):
        raise InputError("boolean is not a number")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, str):
        try:
            return Fraction(obj.strip())
        except ValueError as e:
            raise InputError(f"bad rational {obj!r}") from e
    if isinstance(obj, float):
        # floats are accepted only when they are exact short decimals
        return Fraction(repr(obj))
    raise InputError(f"bad rational {obj!r}")


def vector_to_json(v):
    return [scalar_to_json(x) for x in v]


def vector_from_json(obj, m: int = DEFAULT_FIELD):
    return tuple(scalar_from_json(x, m) for x in obj)
