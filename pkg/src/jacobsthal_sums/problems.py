"""The two equations ``P_k = J_n + J_m`` and ``R_k = J_n + J_m``.

Besides the structural data each solver stage needs, every problem carries
the published constants and solution table so that certificates can compare
recomputed values against them.  Published values are never used as inputs
except where a stage explicitly takes the maximum of a computed and a
published range.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .realctx import BINET_A, Product, rational
from .seqcore import SequenceKind


class Problem(enum.Enum):
    PADOVAN = "padovan"
    PERRIN = "perrin"

    @classmethod
    def parse(cls, name) -> "Problem":
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).lower())
        except ValueError:
            raise ValueError(f"unknown problem {name!r}") from None

    @property
    def data(self) -> "ProblemData":
        return PROBLEMS[self]


@dataclass(frozen=True)
class Published:
    lambda1_constant: str
    final_c1: str
    final_c2: str
    final_c3: str
    n_bound: int
    M: int
    round1_bound: int
    round2_bound: int           # strict: m < round2_bound
    search_k_max: int
    search_n_max: int           # strict: n < search_n_max
    search_m_max: int           # strict: m < search_m_max
    table: tuple
    legendre_m_bound: int | None = None
    legendre_b_max: int | None = None
    legendre_bracket: tuple | None = None
    power_search_m: int | None = None   # strict: m < power_search_m
    round1_q: int | None = None
    round2_q: int | None = None


@dataclass(frozen=True)
class ProblemData:
    problem: Problem
    kind: SequenceKind
    coefficient: str            # "3a" or "3": eta_1 of the first linear form
    eta1: object                # height descriptor of the coefficient
    residual1: int              # |c alpha^k 2^-n - 1| < residual1 / 2^(n-m)
    residual2: int              # |c alpha^k 2^-n / (1 + 2^(m-n)) - 1| < residual2 / 2^m
    k_offset: int               # k <= n log2/log(alpha) + k_offset
    growth_upper_shift: int     # term_k <= alpha^(k + shift)
    published: Published


_Q_FORTY = 6926604615162884914996228107542442207397
_Q_THIRTY_FIVE = 67577997293290973143551202848941006

PADOVAN_TABLE = (
    (0, 1, 0), (1, 1, 0), (2, 1, 0), (3, 2, 1), (4, 2, 1),
    (5, 3, 0), (6, 3, 2), (6, 3, 1), (7, 4, 0), (10, 5, 1),
    (10, 5, 2), (11, 5, 4), (12, 6, 0), (17, 8, 1), (17, 8, 2),
)

PERRIN_TABLE = (
    (0, 3, 1), (1, 0, 0), (2, 2, 1), (2, 1, 1), (3, 3, 1),
    (4, 2, 1), (4, 1, 1), (5, 4, 0), (6, 4, 0), (8, 4, 4),
    (9, 5, 1), (9, 5, 2), (11, 6, 1), (11, 6, 2), (16, 8, 4),
)

PROBLEMS = {
    Problem.PADOVAN: ProblemData(
        problem=Problem.PADOVAN,
        kind=SequenceKind.PADOVAN,
        coefficient="3a",
        eta1=Product((rational(3), BINET_A)),
        residual1=4,
        residual2=5,
        k_offset=3,
        growth_upper_shift=-1,
        published=Published(
            lambda1_constant="4e14", final_c1="4.2e14", final_c2="2e27", final_c3="3",
            n_bound=2 * 10 ** 31, M=6 * 10 ** 31, round1_bound=137, round2_bound=140,
            search_k_max=850, search_n_max=281, search_m_max=144, table=PADOVAN_TABLE,
            round1_q=_Q_FORTY, round2_q=_Q_THIRTY_FIVE,
        ),
    ),
    Problem.PERRIN: ProblemData(
        problem=Problem.PERRIN,
        kind=SequenceKind.PERRIN,
        coefficient="3",
        eta1=rational(3),
        residual1=6,
        residual2=8,
        k_offset=2,
        growth_upper_shift=1,
        published=Published(
            lambda1_constant="6e12", final_c1="2.1e13", final_c2="3e25", final_c3="4",
            n_bound=3 * 10 ** 29, M=9 * 10 ** 29, round1_bound=142, round2_bound=145,
            search_k_max=870, search_n_max=287, search_m_max=145, table=PERRIN_TABLE,
            legendre_m_bound=109, legendre_b_max=80, legendre_bracket=(69, 70),
            power_search_m=299, round1_q=_Q_FORTY, round2_q=_Q_THIRTY_FIVE,
        ),
    ),
}
