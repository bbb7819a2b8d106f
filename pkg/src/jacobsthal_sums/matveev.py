"""Matveev lower bounds for the two linear forms and the absolute bound on ``n``.

Both equations lead to forms ``eta_1 * alpha**k * 2**-n - 1`` in the cubic
field ``Q(alpha)`` (``l = 3``, ``D = 3``), with ``B = 3n`` kept symbolic.
Every constant is therefore reported as a coefficient of ``1 + log(3n)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .certified import CertifiedReal, certify, require
from .problems import Problem
from .realctx import (ALPHA, AlgebraicContext, Power, Quotient, Sum, descriptor_value,
                      log_height, make_context, rational)

MIN_A = Fraction(16, 100)


@dataclass(frozen=True)
class LinearFormInstance:
    l: int
    D: int
    A: tuple
    eta_descriptors: tuple = ()
    b_exponents: tuple = ()

    def __post_init__(self):
        if self.l < 1 or self.D < 1:
            raise ValueError("l and D must be positive")
        if len(self.A) != self.l:
            raise ValueError("need exactly l height multipliers")


def pad_up(x: CertifiedReal, guard_bits: int = 24) -> CertifiedReal:
    """A point value strictly above ``x`` by a relative ``2**-(bits - guard_bits)``."""
    bits = x.precision_bits
    slack = certify(abs(x).hi, bits) * Fraction(1, 2 ** (bits - guard_bits))
    top = (certify(x.hi, bits) + slack).hi
    return CertifiedReal(top, top, bits)


def admissible_bound(eta, ctx: AlgebraicContext, D: int = 3) -> CertifiedReal:
    """Enclosure of ``max(D h(eta), |log eta|, 0.16)``."""
    candidates = [D * log_height(eta, ctx), abs(descriptor_value(eta, ctx).log()),
                  ctx.num(MIN_A)]
    lo = max(c.lo for c in candidates)
    hi = max(c.hi for c in candidates)
    return CertifiedReal(lo, hi, ctx.work_bits)


def height_multiplier(eta, ctx: AlgebraicContext, D: int = 3) -> CertifiedReal:
    """An exact ``A`` certified to dominate ``max(D h(eta), |log eta|, 0.16)``."""
    return pad_up(admissible_bound(eta, ctx, D))


def check_instance(instance: LinearFormInstance, ctx: AlgebraicContext) -> None:
    """Raise unless each ``A_i`` dominates ``D h(eta_i)``, ``|log eta_i|`` and 0.16."""
    for A, eta in zip(instance.A, instance.eta_descriptors):
        need = admissible_bound(eta, ctx, instance.D)
        if not require(A.ge(need), f"A for {eta}"):
            raise ValueError(f"height multiplier for {eta} is too small")


def matveev_prefactor(l: int, D: int, bits: int = 256) -> CertifiedReal:
    """``1.4 * 30**(l+3) * l**4.5 * D**2 * (1 + log D)``."""
    l_pow = certify(l, bits) ** 4 * certify(l, bits).sqrt()
    return (certify(Fraction(14, 10) * 30 ** (l + 3) * D ** 2, bits) * l_pow
            * (1 + certify(D, bits).log()))


def matveev_constant(instance: LinearFormInstance) -> CertifiedReal:
    """Coefficient ``C`` in ``log|Lambda| > -C (1 + log B)``."""
    bits = max((a.precision_bits for a in instance.A if isinstance(a, CertifiedReal)),
               default=256)
    c = matveev_prefactor(instance.l, instance.D, bits)
    for a in instance.A:
        c = c * a
    return c


def _nonvanishing_checks(problem: Problem, ctx: AlgebraicContext) -> list[str]:
    # A vanishing form would make the conjugate |3 b beta^k| (or |3 beta^k|)
    # equal 2^n (resp. 2^n + 2^m), but that conjugate is below 3 < 2^10.
    conj = 3 * ctx.b_abs if problem is Problem.PADOVAN else 3 * ctx.beta_abs
    if not require(conj.lt(3), "conjugate bound"):
        raise ArithmeticError("conjugate is not below 3")
    label = "3|b||beta|^k" if problem is Problem.PADOVAN else "3|beta|^k"
    return [f"nonvanishing: {label} <= {conj.to_decimal(6)} < 3 < 2^10 <= 2^n for n >= 10"]


def lambda1_instance(problem, ctx: AlgebraicContext) -> LinearFormInstance:
    problem = Problem.parse(problem)
    etas = (problem.data.eta1, ALPHA, rational(2))
    return LinearFormInstance(
        l=3, D=3, A=tuple(height_multiplier(e, ctx) for e in etas),
        eta_descriptors=etas, b_exponents=("1", "k", "-n"))


def lambda1_bound(problem, ctx: AlgebraicContext | None = None) -> CertifiedReal:
    """Certified ``c`` with ``log|Lambda_1| > -c (1 + log 3n)``."""
    problem = Problem.parse(problem)
    ctx = ctx or make_context(256)
    _nonvanishing_checks(problem, ctx)
    instance = lambda1_instance(problem, ctx)
    check_instance(instance, ctx)
    return matveev_constant(instance)


@dataclass(frozen=True)
class Lambda2Coefficients:
    """``log|Lambda_2| > -(base + slope*t)(1 + log 3n)`` with ``t = n - m``."""

    prefactor: CertifiedReal    # Matveev prefactor times A_2 * A_3
    a1_base: CertifiedReal
    a1_slope: CertifiedReal

    @property
    def base(self) -> CertifiedReal:
        return self.prefactor * self.a1_base

    @property
    def slope(self) -> CertifiedReal:
        return self.prefactor * self.a1_slope

    def a1(self, t: int) -> CertifiedReal:
        return self.a1_base + self.a1_slope * t


def lambda2_eta1(problem, t: int):
    return Quotient(Problem.parse(problem).data.eta1, Sum(rational(1), Power(rational(2), -t)))


def lambda2_bound(problem, ctx: AlgebraicContext | None = None,
                  check_t: Sequence[int] = (1, 20, 200)) -> Lambda2Coefficients:
    """Affine-in-``t`` coefficients for the second form.

    ``h(eta_1 / (1 + 2**-t)) <= h(eta_1) + t log 2 + log 2`` gives
    ``A_1(t) = 3 h(eta_1) + 3 log 2 + 3t log 2``; the affine form is checked
    against the generic instance at the ``check_t`` values.
    """
    problem = Problem.parse(problem)
    ctx = ctx or make_context(256)
    _nonvanishing_checks(problem, ctx)
    a1_base = pad_up(3 * log_height(problem.data.eta1, ctx) + 3 * ctx.log2)
    a1_slope = pad_up(3 * ctx.log2)
    a2 = height_multiplier(ALPHA, ctx)
    a3 = height_multiplier(rational(2), ctx)
    coeffs = Lambda2Coefficients(matveev_prefactor(3, 3, ctx.work_bits) * a2 * a3,
                                 a1_base, a1_slope)
    for t in check_t:
        eta1 = lambda2_eta1(problem, t)
        instance = LinearFormInstance(3, 3, (coeffs.a1(t), a2, a3),
                                      (eta1, ALPHA, rational(2)), ("1", "k", "-n"))
        check_instance(instance, ctx)
    return coeffs


def _rhs(c1, c2, c3, n: int, ctx_bits: int) -> CertifiedReal:
    one_plus_log = 1 + certify(3 * n, ctx_bits).log()
    return c1 * one_plus_log + c2 * one_plus_log * one_plus_log + c3


def bound_gap(c1, c2, c3, n: int, bits: int = 256) -> CertifiedReal:
    """``n log 2 - (c1 (1+log 3n) + c2 (1+log 3n)^2 + c3)``."""
    c1, c2, c3 = (certify(c, bits) for c in (c1, c2, c3))
    return certify(n, bits) * certify(2, bits).log() - _rhs(c1, c2, c3, n, bits)


def solve_monotone_bound(c1, c2, c3, bits: int = 256) -> int:
    """Largest ``n >= 1`` with ``n log 2 < c1(1+log 3n) + c2(1+log 3n)^2 + c3``, or 0.

    The gap ``n log2 - RHS`` is convex for ``n >= 1`` (its second derivative is
    ``(c1 + 2 c2 log 3n) / n^2``), so the failing set is an interval.  A point
    "holds" only when the gap is certified non-negative, which keeps the
    returned bound conservative.
    """
    c1, c2, c3 = (certify(c, bits) for c in (c1, c2, c3))
    if any(c.lo < 0 for c in (c1, c2, c3)):
        raise ValueError("coefficients must be non-negative")
    log2 = certify(2, bits).log()

    def holds(n: int) -> bool:
        return bound_gap(c1, c2, c3, n, bits).lo >= 0

    def slope_nonneg(n: int) -> bool:
        # derivative of the gap: log 2 - (c1 + 2 c2 (1 + log 3n)) / n
        lp = 1 + certify(3 * n, bits).log()
        return (log2 - (c1 + 2 * c2 * lp) / n).midpoint >= 0

    # n0: first point where the gap stops decreasing.
    if slope_nonneg(1):
        n0 = 1
    else:
        hi = 2
        while not slope_nonneg(hi):
            hi *= 2
        lo = hi // 2
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if slope_nonneg(mid):
                hi = mid
            else:
                lo = mid
        n0 = hi
    candidates = [n for n in (n0 - 1, n0) if n >= 1 and not holds(n)]
    if not candidates:
        return 0
    lo = max(candidates)
    step = max(lo, 1)
    hi = lo + step
    while not holds(hi):
        lo, step = hi, step * 2
        hi = lo + step
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if holds(mid):
            hi = mid
        else:
            lo = mid
    return lo


@dataclass(frozen=True)
class BoundCertificate:
    problem: Problem
    c_lambda1: CertifiedReal
    c_lambda2: CertifiedReal
    lambda2_slope: CertifiedReal
    c1: CertifiedReal
    c2: CertifiedReal
    c3: CertifiedReal
    absolute_n_bound: int
    inequality_trace: tuple = field(default_factory=tuple)


def derive_absolute_bound(problem, ctx: AlgebraicContext | None = None) -> BoundCertificate:
    """Chain both forms into ``n log 2 < c1 (1+L) + c2 (1+L)^2 + c3`` and solve it."""
    problem = Problem.parse(problem)
    data = problem.data
    ctx = ctx or make_context(256)
    trace = []

    k_ratio = 1 / ctx.tau
    # k <= n log2/log(alpha) + offset < 3n once n >= 10.
    if not require((k_ratio * 10 + data.k_offset).lt(30), "k < 3n"):
        raise ArithmeticError("k < 3n fails at n = 10")
    trace.append(f"k <= n*{k_ratio.to_decimal(8)} + {data.k_offset} < 3n for n >= 10; B = 3n")
    trace.extend(_nonvanishing_checks(problem, ctx))

    c = lambda1_bound(problem, ctx)
    r = data.residual1
    trace.append(f"log|Lambda1| > -c(1+log3n), c = {c.to_decimal(8)}")
    trace.append(f"(n-m)log2 - log{r} < c(1+log3n)")

    coeffs = lambda2_bound(problem, ctx)
    s = data.residual2
    trace.append(f"log|Lambda2| > -({coeffs.base.to_decimal(8)} + "
                 f"{coeffs.slope.to_decimal(8)}*(n-m))(1+log3n)")
    trace.append(f"m log2 < log{s} + (A + B(n-m))(1+log3n)")

    per_t = coeffs.slope / ctx.log2
    c1 = coeffs.base + per_t * certify(r, ctx.work_bits).log() + c
    c2 = per_t * c
    c3 = certify(r * s, ctx.work_bits).log()
    trace.append(f"n log2 < {c1.to_decimal(8)}(1+log3n) + {c2.to_decimal(8)}(1+log3n)^2 "
                 f"+ {c3.to_decimal(8)}")
    n_bound = solve_monotone_bound(c1, c2, c3, bits=ctx.work_bits)
    trace.append(f"n <= {n_bound}")
    return BoundCertificate(problem, c, coeffs.base, coeffs.slope, c1, c2, c3,
                            n_bound, tuple(trace))
