"""Dujella-Pethő reduction of ``0 < |k tau - n + mu| < A / B**w`` with ``k <= M``.

For a convergent ``p/q`` of ``tau`` with ``q > 6M`` and
``eps = ||mu q|| - M ||tau q|| > 0`` every solution has
``w < log(A q / eps) / log B``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .certified import CertifiedReal, certify
from .cfrac import (DEFAULT_BITS, ContinuedFraction, Convergent, RealDescriptor,
                    convergents, expand, legendre_partial_quotient_bound, mu_descriptor,
                    nearest_int_distance, tau_descriptor)
from .problems import Problem

DEFAULT_HORIZON = 40


class ReductionStatus(enum.Enum):
    OK = "ok"
    EPSILON_NONPOSITIVE = "epsilon_nonpositive"


@dataclass(frozen=True)
class ReductionInstance:
    tau_descriptor: RealDescriptor
    mu_descriptor: RealDescriptor
    A: Fraction
    B: Fraction
    M: int

    def __post_init__(self):
        object.__setattr__(self, "A", Fraction(self.A))
        object.__setattr__(self, "B", Fraction(self.B))
        if self.A <= 0 or self.B <= 1 or self.M < 1:
            raise ValueError("need A > 0, B > 1 and M >= 1")


@dataclass(frozen=True)
class ReducedBound:
    convergent_used: Convergent
    epsilon: CertifiedReal
    omega_bound: Optional[int]
    status: ReductionStatus
    advanced: int = 0           # convergents skipped past the first with q > 6M

    @property
    def ok(self) -> bool:
        return self.status is ReductionStatus.OK


def _epsilon(inst: ReductionInstance, q: int, bits: int) -> CertifiedReal:
    tau = inst.tau_descriptor(bits)
    mu = inst.mu_descriptor(bits)
    return nearest_int_distance(mu * q) - inst.M * nearest_int_distance(tau * q)


def _certified_epsilon(inst: ReductionInstance, q: int, bits: int,
                       max_bits: int) -> CertifiedReal:
    while True:
        eps = _epsilon(inst, q, bits)
        if eps.lo > 0 or eps.hi <= 0 or 2 * bits > max_bits:
            return eps
        bits *= 2


def omega_bound(A, B, q: int, eps: CertifiedReal) -> int:
    """``floor`` of a certified upper bound for ``log(A q / eps) / log B``."""
    bits = eps.precision_bits
    value = (certify(Fraction(A) * q, bits) / eps).log() / certify(Fraction(B), bits).log()
    return math.floor(value.fraction_bounds()[1])


def reduce_once(inst: ReductionInstance, cf: ContinuedFraction | None = None,
                horizon: int = DEFAULT_HORIZON, bits: int = DEFAULT_BITS,
                max_bits: int = 4 * DEFAULT_BITS) -> ReducedBound:
    """Reduce at the first convergent with ``q > 6M``.

    While ``eps`` is not certified positive, later convergents are tried, up
    to ``horizon`` of them.
    """
    if cf is None:
        cf = expand(inst.tau_descriptor, 64, precision_bits=bits)
    threshold = 6 * inst.M
    while True:
        convs = convergents(cf)
        start = next((c.index for c in convs if c.q > threshold), None)
        if start is not None and len(convs) > start + horizon:
            break
        if cf.terminated:
            raise ValueError("tau is rational; the reduction does not apply")
        cf = cf.extended(2 * cf.validated_count + horizon)
    last = None
    for step in range(horizon + 1):
        conv = convs[start + step]
        eps = _certified_epsilon(inst, conv.q, bits, max_bits)
        last = (conv, eps, step)
        if eps.lo > 0:
            return ReducedBound(conv, eps, omega_bound(inst.A, inst.B, conv.q, eps),
                                ReductionStatus.OK, step)
    conv, eps, step = last
    return ReducedBound(conv, eps, None, ReductionStatus.EPSILON_NONPOSITIVE, step)


@dataclass(frozen=True)
class FamilyReduction:
    per_t: tuple                # ((t, ReducedBound), ...)
    max_ok_bound: Optional[int]
    failed_t: tuple


def reduce_family(problem, t_max: int, A, B, M: int, cf: ContinuedFraction | None = None,
                  horizon: int = DEFAULT_HORIZON, bits: int = DEFAULT_BITS,
                  t_min: int = 1) -> FamilyReduction:
    """Run :func:`reduce_once` with ``mu_t = log(c/(1+2**-t))/log 2`` for ``t_min <= t <= t_max``.

    ``t = 0`` (``n = m``) is a valid member of the family; the pipeline
    includes it.
    """
    problem = Problem.parse(problem)
    tau = tau_descriptor()
    if t_min < 0:
        raise ValueError("t_min must be non-negative")
    if t_max < max(t_min, 1):
        return FamilyReduction((), None, ())
    if cf is None:
        cf = expand(tau, 64, precision_bits=bits)
    per_t = []
    for t in range(t_min, t_max + 1):
        inst = ReductionInstance(tau, mu_descriptor(problem.data.coefficient, t), A, B, M)
        per_t.append((t, reduce_once(inst, cf, horizon=horizon, bits=bits)))
    ok = [r.omega_bound for _, r in per_t if r.ok]
    failed = tuple(t for t, r in per_t if not r.ok)
    return FamilyReduction(tuple(per_t), max(ok) if ok else None, failed)


def largest_power_below(x: int) -> int:
    """Largest ``m >= 0`` with ``2**m < x``, and 0 when no such ``m`` exists."""
    if x <= 1:
        return 0
    return (x - 1).bit_length() - 1


@dataclass(frozen=True)
class LegendreBound:
    M: int
    index_low: int
    index_high: int
    b_max: int
    window: int
    numerator: int          # |k tau - m| < numerator / 2^m
    m_max: int
    valid_from: int         # numerator/2^m < 1/(2k^2) for all m >= valid_from (k < 3m)


def legendre_threshold(numerator: int, k_factor: int = 3) -> int:
    """Least ``m0`` with ``numerator / 2^m < 1/(2 (k_factor m)^2)`` for every ``m >= m0``."""
    c = 2 * numerator * k_factor ** 2
    m = 1
    # 2^m grows by 2 per step while c m^2 grows by at most (1+1/m)^2 <= 2 once m >= 3.
    while not (m >= 3 and 2 ** m > c * m * m):
        m += 1
    return m


def legendre_branch(M: int, cf: ContinuedFraction | None = None,
                    numerator: int = 12) -> LegendreBound:
    """Bound ``m`` in ``R_k = 2^m`` through the convergents of ``tau``.

    ``|k tau - m| < numerator/2^m`` forces ``m/k`` to be a convergent once
    ``m`` passes :func:`legendre_threshold`; for ``k <= M`` the convergent
    gap gives ``|k tau - m| > 1/((b+2) M)``, hence ``2^m < numerator (b+2) M``.
    """
    if M < 2:
        raise ValueError("M must be at least 2")
    if cf is None:
        cf = expand(tau_descriptor(), 64)
    bracket = legendre_partial_quotient_bound(cf, M)
    m_max = largest_power_below(numerator * (bracket.b_max + 2) * M)
    return LegendreBound(M, bracket.index_low, bracket.index_high, bracket.b_max,
                         bracket.window, numerator, m_max, legendre_threshold(numerator))
