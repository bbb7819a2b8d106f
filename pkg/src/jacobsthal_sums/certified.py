"""Interval-backed certified reals.

A :class:`CertifiedReal` is a closed interval ``[lo, hi]`` with MPFR
endpoints.  Every operation rounds the lower endpoint down and the upper
endpoint up, so the true value stays enclosed.  MPFR functions are correctly
rounded, which makes the directed rounding of ``log``, ``exp``, ``sqrt`` and
``cbrt`` rigorous as well.

Comparisons are three-valued: ``True``/``False`` when the order is decided
for every point of both intervals, ``None`` when the intervals overlap.
"""
from __future__ import annotations

import decimal
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Optional, Union

import gmpy2
from gmpy2 import mpfr, mpq, mpz

Number = Union[int, Fraction, "CertifiedReal"]


class PrecisionError(ArithmeticError):
    """Raised when a certified decision cannot be made at the working precision."""


@lru_cache(maxsize=None)
def _down(bits: int):
    return gmpy2.context(precision=bits, round=gmpy2.RoundDown)


@lru_cache(maxsize=None)
def _up(bits: int):
    return gmpy2.context(precision=bits, round=gmpy2.RoundUp)


def _frac(x) -> Fraction:
    p, q = x.as_integer_ratio()
    return Fraction(int(p), int(q))


@dataclass(frozen=True)
class CertifiedReal:
    lo: mpfr
    hi: mpfr
    precision_bits: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    # -- construction -------------------------------------------------------

    @classmethod
    def exact(cls, value, precision_bits: int = 256) -> "CertifiedReal":
        """Enclose an int, Fraction or decimal string (``"4.2e14"``)."""
        if isinstance(value, CertifiedReal):
            return value
        if isinstance(value, str):
            value = Fraction(value)
        elif isinstance(value, float):
            value = Fraction(value)
        elif isinstance(value, type(mpfr(0))):
            return cls(mpfr(value, precision_bits, _down(precision_bits)),
                       mpfr(value, precision_bits, _up(precision_bits)), precision_bits)
        if isinstance(value, int):
            n = mpz(value)
            return cls(mpfr(n, precision_bits, _down(precision_bits)),
                       mpfr(n, precision_bits, _up(precision_bits)), precision_bits)
        if isinstance(value, Rational):
            r = mpq(value.numerator, value.denominator)
            return cls(mpfr(r, precision_bits, _down(precision_bits)),
                       mpfr(r, precision_bits, _up(precision_bits)), precision_bits)
        raise TypeError(f"cannot certify {type(value).__name__}")

    @classmethod
    def from_bounds(cls, lo, hi, precision_bits: int) -> "CertifiedReal":
        lo = cls.exact(lo, precision_bits).lo
        hi = cls.exact(hi, precision_bits).hi
        return cls(lo, hi, precision_bits)

    def _coerce(self, other) -> "CertifiedReal":
        if isinstance(other, CertifiedReal):
            return other
        return CertifiedReal.exact(other, self.precision_bits)

    def _bits(self, other: "CertifiedReal") -> int:
        return max(self.precision_bits, other.precision_bits)

    # -- views --------------------------------------------------------------

    @property
    def midpoint(self) -> mpfr:
        return _up(self.precision_bits + 1).div_2exp(
            _up(self.precision_bits + 1).add(self.lo, self.hi), 1)

    @property
    def radius(self) -> mpfr:
        up = _up(self.precision_bits)
        mid = self.midpoint
        return max(up.sub(self.hi, mid), up.sub(mid, self.lo))

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def fraction_bounds(self) -> tuple[Fraction, Fraction]:
        return _frac(self.lo), _frac(self.hi)

    def floor_bounds(self) -> tuple[int, int]:
        lo, hi = self.fraction_bounds()
        return math.floor(lo), math.floor(hi)

    def contains(self, value) -> bool:
        if isinstance(value, (int, Fraction)):
            lo, hi = self.fraction_bounds()
            return lo <= value <= hi
        other = self._coerce(value)
        return self.lo <= other.lo and other.hi <= self.hi

    def overlaps(self, other: "CertifiedReal") -> bool:
        return not (self.hi < other.lo or other.hi < self.lo)

    def intersect(self, other: "CertifiedReal") -> "CertifiedReal":
        if not self.overlaps(other):
            raise ValueError("disjoint enclosures of the same quantity")
        return CertifiedReal(max(self.lo, other.lo), min(self.hi, other.hi),
                             self._bits(other))

    def __float__(self) -> float:
        return float(self.midpoint)

    def __repr__(self) -> str:
        return f"CertifiedReal({self.to_decimal(20)} ± {float(self.radius):.3g})"

    # -- arithmetic ---------------------------------------------------------

    def __neg__(self):
        return CertifiedReal(-self.hi, -self.lo, self.precision_bits)

    def __add__(self, other):
        other = self._coerce(other)
        b = self._bits(other)
        return CertifiedReal(_down(b).add(self.lo, other.lo),
                             _up(b).add(self.hi, other.hi), b)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        b = self._bits(other)
        return CertifiedReal(_down(b).sub(self.lo, other.hi),
                             _up(b).sub(self.hi, other.lo), b)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        b = self._bits(other)
        d, u = _down(b), _up(b)
        pairs = [(x, y) for x in (self.lo, self.hi) for y in (other.lo, other.hi)]
        return CertifiedReal(min(d.mul(x, y) for x, y in pairs),
                             max(u.mul(x, y) for x, y in pairs), b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.lo <= 0 <= other.hi:
            if other.lo == other.hi == 0:
                raise ZeroDivisionError("division by exact zero")
            raise PrecisionError("divisor interval contains zero")
        b = self._bits(other)
        d, u = _down(b), _up(b)
        pairs = [(x, y) for x in (self.lo, self.hi) for y in (other.lo, other.hi)]
        return CertifiedReal(min(d.div(x, y) for x, y in pairs),
                             max(u.div(x, y) for x, y in pairs), b)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("only integer powers; use exp/log for real exponents")
        b = self.precision_bits
        if k == 0:
            return CertifiedReal.exact(1, b)
        if self.lo > 0:
            d, u = _down(b), _up(b)
            if k > 0:
                return CertifiedReal(d.pow(self.lo, k), u.pow(self.hi, k), b)
            return CertifiedReal(d.pow(self.hi, k), u.pow(self.lo, k), b)
        if k < 0:
            return 1 / (self ** -k)
        result = CertifiedReal.exact(1, b)
        for _ in range(k):
            result = result * self
        if k % 2 == 0 and result.lo < 0:
            result = CertifiedReal(mpfr(0), result.hi, b)
        return result

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return CertifiedReal(mpfr(0), max(-self.lo, self.hi), self.precision_bits)

    def log(self) -> "CertifiedReal":
        if self.hi <= 0:
            raise ValueError("log of a non-positive number")
        if self.lo <= 0:
            raise PrecisionError("log argument interval reaches zero")
        b = self.precision_bits
        return CertifiedReal(_down(b).log(self.lo), _up(b).log(self.hi), b)

    def exp(self) -> "CertifiedReal":
        b = self.precision_bits
        return CertifiedReal(_down(b).exp(self.lo), _up(b).exp(self.hi), b)

    def sqrt(self) -> "CertifiedReal":
        if self.lo < 0:
            raise ValueError("sqrt of a possibly negative number")
        b = self.precision_bits
        return CertifiedReal(_down(b).sqrt(self.lo), _up(b).sqrt(self.hi), b)

    def cbrt(self) -> "CertifiedReal":
        b = self.precision_bits
        return CertifiedReal(_down(b).cbrt(self.lo), _up(b).cbrt(self.hi), b)

    # -- three-valued order ---------------------------------------------------

    def lt(self, other) -> Optional[bool]:
        other = self._coerce(other)
        if self.hi < other.lo:
            return True
        if self.lo >= other.hi:
            return False
        return None

    def le(self, other) -> Optional[bool]:
        other = self._coerce(other)
        if self.hi <= other.lo:
            return True
        if self.lo > other.hi:
            return False
        return None

    def gt(self, other) -> Optional[bool]:
        return self._coerce(other).lt(self)

    def ge(self, other) -> Optional[bool]:
        return self._coerce(other).le(self)

    # -- decimal output -------------------------------------------------------

    def to_decimal(self, digits: int = 30) -> str:
        with decimal.localcontext() as dctx:
            dctx.prec = digits
            mid = _frac(self.midpoint)
            return str(decimal.Decimal(mid.numerator) / decimal.Decimal(mid.denominator))

    def decimal_enclosure(self, digits: int = 40) -> tuple[str, str]:
        """Decimal ``(mid, rad)`` strings whose interval still encloses ``self``.

        ``mid`` carries ``digits`` significant digits and ``rad`` three,
        rounded up.
        """
        lo, hi = self.fraction_bounds()
        with decimal.localcontext() as dctx:
            dctx.prec = digits
            mid = decimal.Decimal((lo + hi).numerator) / decimal.Decimal(2 * (lo + hi).denominator)
        mid_f = Fraction(mid)
        rad_f = max(hi - mid_f, mid_f - lo)
        rad = decimal.Decimal(0)
        if rad_f:
            with decimal.localcontext() as dctx:
                dctx.prec = 3
                dctx.rounding = decimal.ROUND_CEILING
                rad = decimal.Decimal(rad_f.numerator) / decimal.Decimal(rad_f.denominator)
        return _fmt(mid, digits), _fmt(rad, 3)

    def certified_digits(self) -> Optional[int]:
        """Correct significant decimal digits, ``None`` for exact values."""
        if self.is_exact:
            return None
        mid, rad = abs(_frac(self.midpoint)), _frac(self.radius)
        if mid == 0:
            return 0
        return max(0, math.floor(_log10(mid) - _log10(rad)))


def _log10(x: Fraction) -> float:
    return math.log10(x.numerator) - math.log10(x.denominator)


def _fmt(d: decimal.Decimal, digits: int) -> str:
    if d == 0:
        return "0"
    with decimal.localcontext() as dctx:
        dctx.prec = digits
        return str(d.normalize())


def certify(value, precision_bits: int = 256) -> CertifiedReal:
    return CertifiedReal.exact(value, precision_bits)


def require(verdict: Optional[bool], what: str) -> bool:
    """Turn a three-valued verdict into a bool, escalating on ``None``."""
    if verdict is None:
        raise PrecisionError(f"undecidable at working precision: {what}")
    return verdict
