"""The plastic-number root system, Binet evaluation and logarithmic heights.

Only real quantities are materialized.  The complex pair of roots of
``x**3 - x - 1`` enters solely through its modulus ``alpha**-0.5`` and the
modulus of the matching Binet coefficient, ``|b| = (23 a)**-0.5`` (the three
coefficients are the roots of ``23x^3 - 23x^2 + 6x - 1``, whose product is
``1/23``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .certified import CertifiedReal, certify, require
from . import seqcore
from .seqcore import SequenceKind


class ContextError(ArithmeticError):
    """Independent evaluations of a context quantity disagree."""


def _bisect_root(coeffs, lo: Fraction, hi: Fraction, bits: int,
                 seed: Fraction | None = None) -> tuple[Fraction, Fraction]:
    """Dyadic bracket of width ``2**-bits`` around the sign change of a polynomial.

    ``coeffs`` are integer coefficients, highest degree first, and the
    polynomial must change sign strictly on ``[lo, hi]``.  A ``seed`` close to
    the root only shortcuts the search: the returned bracket is always
    confirmed by exact integer sign evaluation.
    """
    deg = len(coeffs) - 1
    scale = 1 << bits
    scale_pows = [scale ** i for i in range(deg + 1)]

    def sign(num: int) -> int:
        value = 0
        for i, c in enumerate(coeffs):
            value += c * num ** (deg - i) * scale_pows[i]
        return (value > 0) - (value < 0)

    a = math.floor(lo * scale)
    b = math.ceil(hi * scale)
    sa, sb = sign(a), sign(b)
    if sa == 0:
        return Fraction(a, scale), Fraction(a, scale)
    if sb == 0:
        return Fraction(b, scale), Fraction(b, scale)
    if sa == sb:
        raise ContextError("no sign change on the bracketing interval")
    if seed is not None:
        s = math.floor(seed * scale)
        for width in (4, 1 << 16):
            ca, cb = max(a, s - width), min(b, s + width)
            if ca < cb and sign(ca) == sa and sign(cb) == sb:
                a, b = ca, cb
                break
    while b - a > 1:
        c = (a + b) // 2
        sc = sign(c)
        if sc == 0:
            return Fraction(c, scale), Fraction(c, scale)
        if sc == sa:
            a = c
        else:
            b = c
    return Fraction(a, scale), Fraction(b, scale)


def _poly(coeffs, x: CertifiedReal) -> CertifiedReal:
    acc = certify(0, x.precision_bits)
    for c in coeffs:
        acc = acc * x + c
    return acc


PSI = (1, 0, -1, -1)
BINET_MINPOLY = (23, -23, 6, -1)


@dataclass(frozen=True)
class AlgebraicContext:
    alpha: CertifiedReal
    beta_abs: CertifiedReal
    a: CertifiedReal
    b_abs: CertifiedReal
    log_alpha: CertifiedReal
    log2: CertifiedReal
    log3: CertifiedReal
    log23: CertifiedReal
    precision_bits: int

    def num(self, value) -> CertifiedReal:
        return certify(value, self.work_bits)

    @property
    def work_bits(self) -> int:
        return self.alpha.precision_bits

    @property
    def tau(self) -> CertifiedReal:
        """``log(alpha) / log(2)``."""
        return self.log_alpha / self.log2

    def fields(self) -> dict:
        return {
            "alpha": self.alpha, "beta_abs": self.beta_abs, "a": self.a,
            "b_abs": self.b_abs, "log_alpha": self.log_alpha, "log2": self.log2,
            "log3": self.log3, "log23": self.log23,
        }


def _alpha_radical(bits: int) -> CertifiedReal:
    s = certify(69, bits).sqrt() * 12
    r1 = (s + 108).cbrt()
    r2 = (108 - s).cbrt()
    return (r1 + r2) / 6


@lru_cache(maxsize=32)
def make_context(precision_bits: int = 256) -> AlgebraicContext:
    """Certified root system at ``precision_bits`` (internally with guard bits)."""
    if precision_bits < 64:
        raise ValueError("precision_bits must be at least 64")
    w = precision_bits + 32

    alpha_radical = _alpha_radical(w)
    lo, hi = _bisect_root(PSI, Fraction(1), Fraction(2), w,
                          seed=alpha_radical.fraction_bounds()[0])
    alpha_bisect = CertifiedReal.from_bounds(lo, hi, w)
    if not alpha_bisect.overlaps(alpha_radical):
        raise ContextError("radical and bisection enclosures of alpha disagree")
    alpha = alpha_bisect.intersect(alpha_radical)

    residual = _poly(PSI, alpha)
    bound = Fraction(1, 2 ** (precision_bits // 2))
    if not (residual.ge(-bound) and residual.le(bound)):
        raise ContextError("alpha does not annihilate x^3 - x - 1 to working accuracy")

    # Coefficient of alpha**k for initials P_0 = P_1 = P_2 = 1:
    # (P_2 - (beta+gamma) P_1 + beta*gamma P_0) / ((alpha-beta)(alpha-gamma)),
    # with beta+gamma = -alpha, beta*gamma = 1/alpha and the denominator
    # equal to the derivative 3 alpha^2 - 1.
    a_binet = (1 + alpha + 1 / alpha) / (3 * alpha ** 2 - 1)
    lo, hi = _bisect_root(BINET_MINPOLY, Fraction(72, 100), Fraction(73, 100), w,
                          seed=a_binet.fraction_bounds()[0])
    a_poly = CertifiedReal.from_bounds(lo, hi, w)
    if not a_binet.overlaps(a_poly):
        raise ContextError("Binet coefficient is not a root of 23x^3 - 23x^2 + 6x - 1")
    a = a_binet.intersect(a_poly)

    beta_abs = 1 / alpha.sqrt()
    b_abs = (1 / (23 * a)).sqrt()
    ctx = AlgebraicContext(
        alpha=alpha,
        beta_abs=beta_abs,
        a=a,
        b_abs=b_abs,
        log_alpha=alpha.log(),
        log2=certify(2, w).log(),
        log3=certify(3, w).log(),
        log23=certify(23, w).log(),
        precision_bits=precision_bits,
    )
    _check_envelopes(ctx)
    return ctx


ENVELOPES = {
    "alpha": (Fraction(132, 100), Fraction(133, 100)),
    "beta_abs": (Fraction(86, 100), Fraction(87, 100)),
    "a": (Fraction(72, 100), Fraction(73, 100)),
    "b_abs": (Fraction(24, 100), Fraction(25, 100)),
}


def _check_envelopes(ctx: AlgebraicContext) -> None:
    for name, (lo, hi) in ENVELOPES.items():
        value = getattr(ctx, name)
        if not (require(value.gt(lo), name) and require(value.lt(hi), name)):
            raise ContextError(f"{name} outside its numeric envelope ({lo}, {hi})")


def binet_padovan(ctx: AlgebraicContext, k: int) -> CertifiedReal:
    """``a * alpha**k`` with ``|P_k - a alpha^k| < alpha^(-k/2)`` certified."""
    if k < 1:
        raise ValueError("k must be at least 1")
    value = ctx.a * ctx.alpha ** k
    residual = abs(value - seqcore.term(SequenceKind.PADOVAN, k))
    if not require(residual.lt(ctx.beta_abs ** k), f"Padovan residual at k={k}"):
        raise ArithmeticError(f"Padovan residual bound fails at k={k}")
    return value


def binet_perrin(ctx: AlgebraicContext, k: int) -> CertifiedReal:
    """``alpha**k`` with ``|R_k - alpha^k| <= 2 |beta|^k`` certified."""
    if k < 0:
        raise ValueError("k must be non-negative")
    value = ctx.alpha ** k
    residual = abs(value - seqcore.term(SequenceKind.PERRIN, k))
    if not require(residual.le(2 * ctx.beta_abs ** k), f"Perrin residual at k={k}"):
        raise ArithmeticError(f"Perrin residual bound fails at k={k}")
    return value


def nearest_integer(x: CertifiedReal) -> int:
    lo, hi = (x + Fraction(1, 2)).floor_bounds()
    if lo != hi:
        from .certified import PrecisionError
        raise PrecisionError("nearest integer is ambiguous at working precision")
    return lo


# -- logarithmic heights ----------------------------------------------------------


@dataclass(frozen=True)
class Rational:
    value: Fraction

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class Alpha:
    def __str__(self):
        return "alpha"


@dataclass(frozen=True)
class BinetA:
    def __str__(self):
        return "a"


@dataclass(frozen=True)
class Product:
    factors: tuple

    def __str__(self):
        return "*".join(f"({f})" for f in self.factors)


@dataclass(frozen=True)
class Quotient:
    num: object
    den: object

    def __str__(self):
        return f"({self.num})/({self.den})"


@dataclass(frozen=True)
class Sum:
    left: object
    right: object

    def __str__(self):
        return f"({self.left})+({self.right})"


@dataclass(frozen=True)
class Power:
    base: object
    exponent: int

    def __str__(self):
        return f"({self.base})^{self.exponent}"


Descriptor = Union[Rational, Alpha, BinetA, Product, Quotient, Sum, Power]

ALPHA = Alpha()
BINET_A = BinetA()


def rational(p, q=1) -> Rational:
    return Rational(Fraction(p, q))


def log_height(desc: Descriptor, ctx: AlgebraicContext) -> CertifiedReal:
    """Logarithmic height, exact for atoms and an upper bound for composites.

    Atoms: ``h(p/q) = log max(|p|, q)``, ``h(alpha) = log(alpha)/3`` and
    ``h(a) = log(23)/3`` (leading coefficient 23, all conjugates inside the
    unit disc).  Composites use ``h(x*y), h(x/y) <= h(x) + h(y)``,
    ``h(x + y) <= h(x) + h(y) + log 2`` and ``h(x**s) = |s| h(x)``.
    """
    if isinstance(desc, Rational):
        v = desc.value
        return certify(max(abs(v.numerator), v.denominator), ctx.work_bits).log()
    if isinstance(desc, Alpha):
        return ctx.log_alpha / 3
    if isinstance(desc, BinetA):
        return ctx.log23 / 3
    if isinstance(desc, Product):
        total = ctx.num(0)
        for f in desc.factors:
            total = total + log_height(f, ctx)
        return total
    if isinstance(desc, Quotient):
        return log_height(desc.num, ctx) + log_height(desc.den, ctx)
    if isinstance(desc, Sum):
        return log_height(desc.left, ctx) + log_height(desc.right, ctx) + ctx.log2
    if isinstance(desc, Power):
        return abs(desc.exponent) * log_height(desc.base, ctx)
    raise TypeError(f"unsupported height descriptor {desc!r}")


def descriptor_value(desc: Descriptor, ctx: AlgebraicContext) -> CertifiedReal:
    """Certified numeric value of a descriptor (used for ``|log eta|`` checks)."""
    if isinstance(desc, Rational):
        return ctx.num(desc.value)
    if isinstance(desc, Alpha):
        return ctx.alpha
    if isinstance(desc, BinetA):
        return ctx.a
    if isinstance(desc, Product):
        total = ctx.num(1)
        for f in desc.factors:
            total = total * descriptor_value(f, ctx)
        return total
    if isinstance(desc, Quotient):
        return descriptor_value(desc.num, ctx) / descriptor_value(desc.den, ctx)
    if isinstance(desc, Sum):
        return descriptor_value(desc.left, ctx) + descriptor_value(desc.right, ctx)
    if isinstance(desc, Power):
        return descriptor_value(desc.base, ctx) ** desc.exponent
    raise TypeError(f"unsupported descriptor {desc!r}")
