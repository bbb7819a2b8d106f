"""Exact Padovan, Perrin and Jacobsthal terms and their growth envelopes."""
from __future__ import annotations

import enum
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .certified import require


class SequenceKind(enum.Enum):
    PADOVAN = "padovan"
    PERRIN = "perrin"
    JACOBSTHAL = "jacobsthal"

    @classmethod
    def parse(cls, name) -> "SequenceKind":
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).lower())
        except ValueError:
            raise ValueError(f"unknown sequence kind {name!r}") from None


_INITIAL = {
    SequenceKind.PADOVAN: (1, 1, 1),
    SequenceKind.PERRIN: (3, 0, 2),
    SequenceKind.JACOBSTHAL: (0, 1),
}

# Smallest index at which the two-sided growth envelope is valid.
GROWTH_START = {
    SequenceKind.PADOVAN: 1,
    SequenceKind.PERRIN: 2,
    SequenceKind.JACOBSTHAL: 1,
}


def _extend(kind: SequenceKind, terms: list, max_index: int) -> None:
    if kind is SequenceKind.JACOBSTHAL:
        for _ in range(len(terms), max_index + 1):
            terms.append(terms[-1] + 2 * terms[-2])
    else:
        for _ in range(len(terms), max_index + 1):
            terms.append(terms[-2] + terms[-3])


_cache = {kind: list(init) for kind, init in _INITIAL.items()}
_lock = threading.Lock()


def term(kind, index: int) -> int:
    """Exact ``index``-th term of the sequence ``kind``."""
    kind = SequenceKind.parse(kind)
    if index < 0:
        raise ValueError("index must be non-negative")
    terms = _cache[kind]
    if index >= len(terms):
        with _lock:
            _extend(kind, terms, index)
    return terms[index]


@dataclass(frozen=True)
class TermTable:
    kind: SequenceKind
    terms: tuple
    max_index: int

    def __getitem__(self, index: int) -> int:
        return self.terms[index]

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)


def table(kind, max_index: int) -> TermTable:
    kind = SequenceKind.parse(kind)
    if max_index < 0:
        raise ValueError("max_index must be non-negative")
    term(kind, max_index)
    return TermTable(kind, tuple(_cache[kind][: max_index + 1]), max_index)


def satisfies_recurrence(tab: TermTable) -> bool:
    t = tab.terms
    if tab.kind is SequenceKind.JACOBSTHAL:
        return all(t[i] == t[i - 1] + 2 * t[i - 2] for i in range(2, len(t)))
    return all(t[i] == t[i - 2] + t[i - 3] for i in range(3, len(t)))


def check_growth(kind, indices: Iterable[int], ctx=None) -> list[tuple[int, bool]]:
    """Check the two-sided exponential envelope of each term.

    Padovan: ``alpha**(k-3) <= P_k <= alpha**(k-1)`` for ``k >= 1`` except
    ``k = 3``, where ``P_3 = 2 > alpha**2``.
    Perrin: ``alpha**(k-2) <= R_k <= alpha**(k+1)`` for ``k >= 2``.
    Jacobsthal: ``2**(n-2) <= J_n <= 2**(n-1)`` for ``n >= 1`` (exact).

    Verdicts for the Padovan/Perrin bounds come from certified comparisons;
    an undecidable comparison raises :class:`PrecisionError`.
    """
    kind = SequenceKind.parse(kind)
    indices = list(indices)
    start = GROWTH_START[kind]
    bad = [i for i in indices if i < start]
    if bad:
        raise ValueError(f"growth bound for {kind.value} only holds from index {start}; got {bad[0]}")
    if kind is SequenceKind.JACOBSTHAL:
        out = []
        for n in indices:
            j = term(kind, n)
            out.append((n, Fraction(2) ** (n - 2) <= j <= Fraction(2) ** (n - 1)))
        return out

    if ctx is None:
        from .realctx import make_context
        ctx = make_context(256)
    lo_shift, hi_shift = (-3, -1) if kind is SequenceKind.PADOVAN else (-2, 1)
    out = []
    for k in indices:
        value = term(kind, k)
        lower = require((ctx.alpha ** (k + lo_shift)).le(value), f"lower envelope at {k}")
        upper = require((ctx.alpha ** (k + hi_shift)).ge(value), f"upper envelope at {k}")
        out.append((k, lower and upper))
    return out


def is_increasing_from(kind, start: int, stop: int) -> bool:
    return all(term(kind, i) < term(kind, i + 1) for i in range(start, stop))


def index_map(tab: TermTable, limit: Optional[int] = None) -> dict[int, list[int]]:
    """Map each value to every index attaining it (``J_1 = J_2 = 1``)."""
    out: dict[int, list[int]] = {}
    for i, v in enumerate(tab.terms):
        if limit is not None and i > limit:
            break
        out.setdefault(v, []).append(i)
    return out
