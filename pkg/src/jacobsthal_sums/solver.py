"""Brute-force search, the end-to-end pipeline and certificate assembly."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional

from . import seqcore
from .cfrac import DEFAULT_BITS, convergents, expand, mu_descriptor, tau_descriptor
from .certified import require
from .dpreduce import (DEFAULT_HORIZON, FamilyReduction, LegendreBound, ReducedBound,
                       ReductionInstance, legendre_branch, reduce_family, reduce_once)
from .matveev import BoundCertificate, derive_absolute_bound
from .problems import Problem
from .realctx import make_context
from .seqcore import SequenceKind


class SolutionTriple(NamedTuple):
    k: int
    n: int
    m: int

    def __str__(self):
        return f"({self.k},{self.n},{self.m})"


def verify_triple(problem, triple) -> bool:
    """Exact check of ``term(k) == J_n + J_m``; negative indices are never solutions."""
    problem = Problem.parse(problem)
    k, n, m = triple
    if min(k, n, m) < 0:
        return False
    J = SequenceKind.JACOBSTHAL
    return seqcore.term(problem.data.kind, k) == seqcore.term(J, n) + seqcore.term(J, m)


def _search_block(kind_value: str, k_lo: int, k_hi: int, n_max: int) -> list[tuple]:
    kind = SequenceKind(kind_value)
    jac = seqcore.table(SequenceKind.JACOBSTHAL, n_max)
    where = seqcore.index_map(jac)
    out = []
    for k in range(k_lo, k_hi + 1):
        target = seqcore.term(kind, k)
        for m, jm in enumerate(jac.terms):
            if jm > target:
                break
            for n in where.get(target - jm, ()):
                if n >= m:
                    out.append((k, n, m))
    return out


def search_sums(problem, k_max: int, n_max: int, workers: int = 1) -> list[SolutionTriple]:
    """Every ``(k, n, m)`` with ``k <= k_max`` and ``m <= n <= n_max``, sorted.

    Index-level: ``J_1 = J_2`` makes both indices appear wherever either does.
    """
    problem = Problem.parse(problem)
    if k_max < 2 or n_max < 2:
        raise ValueError("k_max and n_max must be at least 2")
    kind = problem.data.kind.value
    if workers <= 1:
        found = _search_block(kind, 0, k_max, n_max)
    else:
        step = math.ceil((k_max + 1) / workers)
        blocks = [(lo, min(lo + step - 1, k_max)) for lo in range(0, k_max + 1, step)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(_search_block, [kind] * len(blocks), *zip(*blocks),
                             [n_max] * len(blocks))
            found = [t for part in parts for t in part]
    return sorted(SolutionTriple(*t) for t in found)


def search_power_of_two(m_max: int) -> list[tuple[int, int]]:
    """All ``(k, m)`` with ``R_k = 2**m`` and ``1 <= m <= m_max``.

    ``k`` runs to ``3 m_max`` and further while ``R_k <= 2**m_max``; ``R`` is
    non-decreasing from index 4 (``R_{k+1} - R_k = R_{k-4}``), so nothing is
    missed past that point.
    """
    if m_max < 1:
        raise ValueError("m_max must be at least 1")
    top = 1 << m_max
    out = []
    k = 0
    while k <= 3 * m_max or k < 5 or seqcore.term(SequenceKind.PERRIN, k) <= top:
        r = seqcore.term(SequenceKind.PERRIN, k)
        if r >= 2 and r <= top and r & (r - 1) == 0:
            out.append((k, r.bit_length() - 1))
        k += 1
    return out


# -- comparison with the reference tables --------------------------------------------


def _canonical(t: SolutionTriple) -> SolutionTriple:
    # J_1 = J_2: index 2 and index 1 are interchangeable in n and m.
    return SolutionTriple(t.k, 1 if t.n == 2 else t.n, 1 if t.m == 2 else t.m)


@dataclass(frozen=True)
class Discrepancy:
    triple: SolutionTriple
    kind: str                   # "failed" | "missing" | "index_alias"
    detail: str
    nearby: tuple = ()

    @property
    def unexplained(self) -> bool:
        return self.kind in ("failed", "missing")


def diff_against_table(problem, solutions: Iterable[SolutionTriple],
                       reference: Iterable) -> list[Discrepancy]:
    """Classify where a reference table and the search output disagree.

    ``failed``: a listed triple that does not satisfy the equation, with the
    search solutions that share ``k`` and one of ``n, m`` as ``nearby``.
    ``index_alias``: a found triple absent from the list that differs from a
    listed one only by ``J_1 = J_2``.  ``missing``: any other found triple not
    in the list.
    """
    problem = Problem.parse(problem)
    kind = problem.data.kind
    J = SequenceKind.JACOBSTHAL
    solutions = sorted(set(solutions))
    reference = [SolutionTriple(*t) for t in reference]
    listed = set(reference)
    out: list[Discrepancy] = []
    explained: set = set()
    for t in sorted(listed):
        if verify_triple(problem, t):
            continue
        lhs = seqcore.term(kind, t.k)
        rhs = seqcore.term(J, t.n) + seqcore.term(J, t.m)
        near = tuple(s for s in solutions
                     if s.k == t.k and (s.n == t.n) + (s.m == t.m) == 1 and s not in listed)
        explained.update(near)
        out.append(Discrepancy(t, "failed", f"{lhs} != {seqcore.term(J, t.n)} + "
                                            f"{seqcore.term(J, t.m)} = {rhs}", near))
    canon_listed = {_canonical(t): t for t in sorted(listed) if verify_triple(problem, t)}
    for s in solutions:
        if s in listed or s in explained:
            continue
        twin = canon_listed.get(_canonical(s))
        value = seqcore.term(kind, s.k)
        sums = f"{value} = {seqcore.term(J, s.n)} + {seqcore.term(J, s.m)}"
        if twin is not None:
            out.append(Discrepancy(s, "index_alias", f"{sums}; same values as {twin}", (twin,)))
        else:
            out.append(Discrepancy(s, "missing", f"{sums}; not listed"))
    return sorted(out, key=lambda d: (d.triple, d.kind))


# -- pipeline -----------------------------------------------------------------------


class PipelineError(RuntimeError):
    def __init__(self, stage: str, reason: str, trace: list):
        super().__init__(f"{stage}: {reason}")
        self.stage = stage
        self.trace = list(trace)


@dataclass(frozen=True)
class SearchRange:
    k_max: int
    n_max: int
    m_max: int


@dataclass(frozen=True)
class Certificate:
    problem: Problem
    absolute_bound: BoundCertificate
    round1: ReducedBound
    round1_A: int
    round1_M: int
    round2: FamilyReduction
    round2_A: int
    legendre: Optional[LegendreBound]
    power_solutions: Optional[tuple]
    search_range: SearchRange
    solutions: tuple
    paper_table_diff: tuple
    notes: tuple
    precision_bits: int
    cfrac_precision_bits: int
    trace: tuple = field(default_factory=tuple)

    @property
    def unexplained(self) -> list[Discrepancy]:
        return [d for d in self.paper_table_diff if d.unexplained]


def reduction_constant(residual: int, ctx) -> int:
    """Least integer ``A >= 2 residual / log 2``.

    From ``|x| < residual/2^w <= 1/2`` one gets ``|log(1+x)| < 2|x|``.
    """
    value = (2 * residual) / ctx.log2
    lo, hi = value.floor_bounds()
    return hi + 1


def small_exponent_threshold(residual: int) -> int:
    """Least ``w`` with ``residual / 2**w <= 1/2``."""
    return (2 * residual - 1).bit_length()


def _k_bound(n: int, data, ctx) -> int:
    # k <= n log2/log(alpha) + offset, rounded up from the certified upper end.
    value = (1 / ctx.tau) * n + data.k_offset
    return value.floor_bounds()[1]


def _n_for_terms(kind: SequenceKind, k_max: int) -> int:
    """Largest ``n`` with ``J_n <= max(term(k) for k <= k_max)``."""
    top = max(seqcore.term(kind, k) for k in range(k_max + 1))
    n = 0
    while seqcore.term(SequenceKind.JACOBSTHAL, n + 1) <= top:
        n += 1
    return n


def _reference_index(convs, q: Optional[int]) -> Optional[int]:
    if q is None:
        return None
    return next((c.index for c in convs if c.q == q), None)


def run_pipeline(problem, precision_bits: int = 256, cfrac_bits: int = DEFAULT_BITS,
                 horizon: int = DEFAULT_HORIZON, workers: int = 1) -> Certificate:
    """Absolute bound, two reductions, optional Legendre branch, search and diff."""
    problem = Problem.parse(problem)
    data = problem.data
    pub = data.published
    trace: list[str] = []
    stage = "context"
    try:
        ctx = make_context(precision_bits)
        stage = "absolute_bound"
        bound = derive_absolute_bound(problem, ctx)
        trace.extend(bound.inequality_trace)

        stage = "round1"
        tau = tau_descriptor()
        cf = expand(tau, 128, precision_bits=cfrac_bits)
        cf_ctx = make_context(cfrac_bits)
        M = max(pub.M, 3 * bound.absolute_n_bound)
        A1 = reduction_constant(data.residual1, cf_ctx)
        r1 = reduce_once(ReductionInstance(tau, mu_descriptor(data.coefficient), A1, 2, M),
                         cf, horizon=horizon, bits=cfrac_bits)
        if not r1.ok:
            raise PipelineError(stage, "epsilon never certified positive", trace)
        t_max = max(r1.omega_bound, small_exponent_threshold(data.residual1) - 1)
        trace.append(f"n - m <= {t_max} (q_{r1.convergent_used.index}, A = {A1}, M = {M})")

        stage = "round2"
        A2 = reduction_constant(data.residual2, cf_ctx)
        r2 = reduce_family(problem, t_max, A2, 2, M, cf, horizon=horizon, bits=cfrac_bits,
                           t_min=0)
        legendre = power = None
        if r2.failed_t:
            if problem is not Problem.PERRIN or r2.failed_t != (1,):
                raise PipelineError(stage, f"epsilon not positive for t = {list(r2.failed_t)}",
                                    trace)
            stage = "legendre"
            # n - m = 1 gives R_k = J_n + J_{n-1} = 2^(n-1).
            legendre = legendre_branch(M, cf)
            power = tuple(search_power_of_two(max(legendre.m_max, pub.power_search_m or 1)))
            trace.append(f"t = 1: R_k = 2^(n-1) with n - 1 <= {legendre.m_max}; "
                         f"solutions {list(power)}")
        m_max = max(r2.max_ok_bound or 0, small_exponent_threshold(data.residual2) - 1)
        n_max = m_max + t_max
        if legendre is not None:
            n_max = max(n_max, legendre.m_max + 1)
        trace.append(f"m <= {m_max}, n <= {n_max}")

        stage = "search"
        k_max = max(_k_bound(n_max, data, ctx), pub.search_k_max)
        n_search = max(n_max, pub.search_n_max - 1, _n_for_terms(data.kind, k_max))
        solutions = search_sums(problem, k_max, n_search, workers=workers)
        trace.append(f"searched k <= {k_max}, m <= n <= {n_search}: {len(solutions)} triples")
        diff = diff_against_table(problem, solutions, pub.table)
    except PipelineError:
        raise
    except (ArithmeticError, ValueError) as exc:
        raise PipelineError(stage, str(exc), trace) from exc

    notes = _notes(problem, ctx, cf, r1, r2, legendre, power)
    return Certificate(
        problem=problem, absolute_bound=bound, round1=r1, round1_A=A1, round1_M=M,
        round2=r2, round2_A=A2, legendre=legendre, power_solutions=power,
        search_range=SearchRange(k_max, n_search, n_search), solutions=tuple(solutions),
        paper_table_diff=tuple(diff), notes=tuple(notes), precision_bits=precision_bits,
        cfrac_precision_bits=cfrac_bits, trace=tuple(trace))


def _notes(problem: Problem, ctx, cf, r1: ReducedBound, r2: FamilyReduction, legendre,
           power) -> list[str]:
    pub = problem.data.published
    convs = convergents(cf)
    notes = []
    if problem is Problem.PADOVAN:
        naive = (ctx.alpha + 1) / (3 * ctx.alpha ** 2 - 1)
        notes.append(
            "Binet coefficient of alpha^k for P_0 = P_1 = P_2 = 1 is "
            f"(1 + alpha + 1/alpha)/(3 alpha^2 - 1) = {ctx.a.to_decimal(12)}, a root of "
            f"23x^3 - 23x^2 + 6x - 1; (alpha + 1)/(3 alpha^2 - 1) = "
            f"{naive.to_decimal(12)} does not reproduce P_k")
    notes.append("Jacobsthal recurrence taken as J_n = J_(n-1) + 2 J_(n-2); "
                 "J_n = 2 J_(n-1) + J_(n-2) contradicts J = 0, 1, 1, 3, 5, 11")
    if problem is Problem.PERRIN:
        notes.append("Perrin initials taken as R_0 = 3, R_1 = 0, R_2 = 2; R_1 = 1 "
                     "contradicts R = 3, 0, 2, 3, 2, 5")
    i1 = _reference_index(convs, pub.round1_q)
    i2 = _reference_index(convs, pub.round2_q)
    q1 = r1.convergent_used
    notes.append(f"first convergent denominator above 6M is q_{q1.index} "
                 f"({len(str(q1.q))} digits)")
    if i1 is not None:
        notes.append(f"reference round-1 denominator ({len(str(pub.round1_q))} digits) "
                     f"is q_{i1}")
    if i2 is not None:
        notes.append(f"reference round-2 denominator ({len(str(pub.round2_q))} digits) "
                     f"is q_{i2}")
    notes.append("epsilon = ||mu q|| - M ||tau q|| is evaluated at a single convergent q "
                 "for both terms")
    if r1.ok and require(r1.epsilon.lt(Fraction(3, 10)), "epsilon vs 0.3"):
        notes.append(f"round-1 epsilon {r1.epsilon.to_decimal(6)} is positive but below 0.3")
    ok2 = [r for _, r in r2.per_t if r.ok]
    if ok2:
        low = min(ok2, key=lambda r: r.epsilon.fraction_bounds()[0])
        notes.append(f"smallest round-2 epsilon is {low.epsilon.to_decimal(6)} "
                     f"(q_{low.convergent_used.index})")
    if legendre is not None:
        if pub.legendre_bracket and pub.legendre_bracket != (legendre.index_low,
                                                             legendre.index_high):
            lo, hi = pub.legendre_bracket
            notes.append(f"q_{legendre.index_low} <= M < q_{legendre.index_high}; "
                         f"reference bracket uses indices {lo}, {hi}")
        notes.append("t = 1 has mu = 1 exactly, so epsilon <= 0 at every convergent")
        notes.append(f"{legendre.numerator}/2^m < 1/(2k^2) with k < 3m needs m >= "
                     f"{legendre.valid_from}; smaller m are covered by the power search")
        if power and any(k > 3 * m for k, m in power):
            bad = [(k, m) for k, m in power if k > 3 * m]
            notes.append(f"R_k = 2^m solutions {bad} have k > 3m; "
                         "the power search runs k past 3 m_max")
    return notes
