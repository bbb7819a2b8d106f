"""Validated continued fractions of certified reals.

A partial quotient is accepted only when both endpoints of the enclosing
interval produce it, so every emitted quotient is rigorous.  Expansions are
additionally recomputed at doubled precision and the common prefix compared.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, NamedTuple, Optional

from .certified import CertifiedReal, certify
from .realctx import make_context

DEFAULT_BITS = 4096
MAX_BITS = 1 << 17


class ExpansionError(ArithmeticError):
    def __init__(self, index: int, precision_bits: int):
        super().__init__(
            f"partial quotient {index} not stable below {precision_bits} bits")
        self.index = index
        self.precision_bits = precision_bits


@dataclass(frozen=True)
class RealDescriptor:
    """A symbolic real that can be re-evaluated at any precision."""

    name: str
    evaluate: Callable[[int], CertifiedReal] = field(compare=False, repr=False)
    exact: Optional[Fraction] = None

    def __call__(self, bits: int) -> CertifiedReal:
        if self.exact is not None:
            return certify(self.exact, bits)
        return self.evaluate(bits)


def rational_descriptor(value) -> RealDescriptor:
    value = Fraction(value)
    return RealDescriptor(str(value), lambda bits: certify(value, bits), exact=value)


def tau_descriptor() -> RealDescriptor:
    """``log(alpha) / log(2)``."""
    return RealDescriptor("log(alpha)/log(2)", lambda bits: make_context(bits).tau)


def mu_descriptor(coefficient: str, t: Optional[int] = None) -> RealDescriptor:
    """``log(c / (1 + 2**-t)) / log(2)`` with ``c`` either ``3a`` or ``3``.

    ``t=None`` drops the ``1 + 2**-t`` factor.  When ``c = 3`` and the
    argument is an exact power of two the result is returned as an exact
    rational, which is what makes ``t = 1`` a degenerate reduction instance.
    """
    if coefficient not in ("3a", "3"):
        raise ValueError("coefficient must be '3a' or '3'")
    if t is not None and t < 0:
        raise ValueError("t must be non-negative")
    label = f"log({coefficient})/log(2)" if t is None else \
        f"log({coefficient}/(1+2^-{t}))/log(2)"
    scale = Fraction(1) if t is None else Fraction(2 ** t, 2 ** t + 1)
    if coefficient == "3":
        arg = 3 * scale
        if arg.denominator == 1 and arg.numerator & (arg.numerator - 1) == 0:
            return rational_descriptor(arg.numerator.bit_length() - 1)
        if arg.numerator == 1 and arg.denominator & (arg.denominator - 1) == 0:
            return rational_descriptor(-(arg.denominator.bit_length() - 1))

    def evaluate(bits: int) -> CertifiedReal:
        ctx = make_context(bits)
        c = 3 * ctx.a if coefficient == "3a" else ctx.num(3)
        return (c * scale).log() / ctx.log2

    return RealDescriptor(label, evaluate)


def parse_descriptor(text: str) -> RealDescriptor:
    """CLI syntax: ``tau``, ``mu:padovan[:t]``, ``mu:perrin[:t]`` or ``p/q``."""
    text = text.strip()
    if text in ("tau", "log_alpha/log2", "log(alpha)/log(2)"):
        return tau_descriptor()
    if text.startswith("mu:"):
        parts = text.split(":")
        coefficient = {"padovan": "3a", "perrin": "3"}.get(parts[1])
        if coefficient is None or len(parts) > 3:
            raise ValueError(f"bad descriptor {text!r}")
        return mu_descriptor(coefficient, int(parts[2]) if len(parts) == 3 else None)
    try:
        return rational_descriptor(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"bad descriptor {text!r}") from None


def _quotients_of(lo: Fraction, hi: Fraction) -> tuple[list[int], bool]:
    """Common partial quotients of every real in ``[lo, hi]``.

    Returns ``(quotients, terminated)``; ``terminated`` is true only for a
    degenerate interval holding an exact rational whose expansion finished.
    """
    ln, ld = lo.numerator, lo.denominator
    hn, hd = hi.numerator, hi.denominator
    out: list[int] = []
    while True:
        a_lo, r_lo = divmod(ln, ld)
        a_hi, r_hi = divmod(hn, hd)
        if a_lo != a_hi:
            return out, False
        out.append(a_lo)
        if r_lo == 0 or r_hi == 0:
            if r_lo == 0 and r_hi == 0 and ln * hd == hn * ld:
                return out, True
            # one endpoint is an integer: the next quotient is unbounded.
            return out, False
        # x -> 1/(x - a) reverses the order of the endpoints.
        ln, ld, hn, hd = hd, r_hi, ld, r_lo


@dataclass(frozen=True)
class ContinuedFraction:
    value_descriptor: RealDescriptor
    partial_quotients: tuple
    validated_count: int
    precision_bits: int
    terminated: bool = False

    def extended(self, count: int) -> "ContinuedFraction":
        if count <= self.validated_count or self.terminated:
            return self
        return expand(self.value_descriptor, count,
                      precision_bits=max(self.precision_bits, DEFAULT_BITS))


class Convergent(NamedTuple):
    index: int
    p: int
    q: int

    def __str__(self):
        return f"{self.p}/{self.q}"


def expand(value: RealDescriptor, count: int, precision_bits: int = DEFAULT_BITS,
           max_precision_bits: int = MAX_BITS) -> ContinuedFraction:
    """At least ``count`` validated partial quotients (fewer only if the value is rational)."""
    if count < 1:
        raise ValueError("count must be at least 1")
    if value.exact is not None:
        quotients, _ = _quotients_of(value.exact, value.exact)
        return ContinuedFraction(value, tuple(quotients), len(quotients),
                                 precision_bits, terminated=True)
    bits = precision_bits
    while True:
        quotients, terminated = _quotients_of(*value(bits).fraction_bounds())
        if terminated or len(quotients) >= count:
            break
        if bits * 2 > max_precision_bits:
            raise ExpansionError(len(quotients), bits)
        bits *= 2
    if not terminated:
        check, _ = _quotients_of(*value(2 * bits).fraction_bounds())
        if check[: len(quotients)] != quotients:
            first = next(i for i, (x, y) in enumerate(zip(quotients, check)) if x != y)
            raise ExpansionError(first, 2 * bits)
    return ContinuedFraction(value, tuple(quotients), len(quotients), bits, terminated)


def convergents(cf: ContinuedFraction) -> list[Convergent]:
    out = []
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    for i, a in enumerate(cf.partial_quotients[: cf.validated_count]):
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        out.append(Convergent(i, p, q))
    return out


def first_denominator_exceeding(cf: ContinuedFraction, bound: int) -> Convergent:
    """Least-index convergent with ``q > bound``, extending the expansion if needed."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    while True:
        for c in convergents(cf):
            if c.q > bound:
                return c
        if cf.terminated:
            raise ValueError(f"rational value has no convergent with q > {bound}")
        cf = cf.extended(2 * cf.validated_count + 8)


def nearest_int_distance(x: CertifiedReal) -> CertifiedReal:
    """Enclosure of the distance from ``x`` to the nearest integer.

    If the nearest integer is ambiguous the enclosure widens to cover every
    possibility instead of failing.
    """
    lo, hi = x.fraction_bounds()
    n_lo = math.floor(lo + Fraction(1, 2))
    n_hi = math.floor(hi + Fraction(1, 2))
    bits = x.precision_bits
    if n_lo == n_hi:
        return abs(x - n_lo)
    if n_hi - n_lo >= 2 or lo <= n_lo or hi >= n_hi:
        return CertifiedReal.from_bounds(0, Fraction(1, 2), bits)
    return CertifiedReal.from_bounds(min(lo - n_lo, n_hi - hi), Fraction(1, 2), bits)


class LegendreBracket(NamedTuple):
    index_low: int
    index_high: int
    b_max: int
    window: int


def legendre_partial_quotient_bound(cf: ContinuedFraction, M: int,
                                    window_extra: int = 2) -> LegendreBracket:
    """Convergents ``q_low <= M < q_high`` and the largest quotient ``a_1..a_{high+extra}``."""
    if M < 1:
        raise ValueError("M must be positive")
    while True:
        convs = convergents(cf)
        high = next((c.index for c in convs if c.q > M), None)
        if high is not None and cf.validated_count > high + window_extra:
            break
        if cf.terminated:
            raise ValueError("expansion too short for the requested bracket")
        cf = cf.extended(2 * cf.validated_count + 8)
    window = high + window_extra
    b_max = max(cf.partial_quotients[1: window + 1])
    return LegendreBracket(high - 1, high, b_max, window)
