import pytest

from jacobsthal_sums import seqcore
from jacobsthal_sums.seqcore import SequenceKind as K

from conftest import plain_terms


@pytest.mark.parametrize("kind,index,value", [
    (K.PADOVAN, 10, 12), (K.PERRIN, 8, 10), (K.JACOBSTHAL, 10, 341), (K.JACOBSTHAL, 0, 0),
])
def test_listed_terms(kind, index, value):
    assert seqcore.term(kind, index) == value


def test_listed_prefixes():
    assert list(seqcore.table(K.PADOVAN, 11)) == [1, 1, 1, 2, 2, 3, 4, 5, 7, 9, 12, 16]
    assert list(seqcore.table(K.PERRIN, 9)) == [3, 0, 2, 3, 2, 5, 5, 7, 10, 12]
    assert list(seqcore.table(K.JACOBSTHAL, 17)) == [
        0, 1, 1, 3, 5, 11, 21, 43, 85, 171, 341, 683, 1365, 2731, 5461, 10923, 21845, 43691]


def test_tables():
    assert list(seqcore.table(K.JACOBSTHAL, 3)) == [0, 1, 1, 3]
    assert list(seqcore.table(K.PERRIN, 4)) == [3, 0, 2, 3, 2]
    assert list(seqcore.table(K.PADOVAN, 2)) == [1, 1, 1]
    with pytest.raises(ValueError):
        seqcore.table(K.PADOVAN, -1)
    with pytest.raises(ValueError):
        seqcore.term(K.PADOVAN, -1)


def test_recurrences_to_5000():
    for kind in K:
        tab = seqcore.table(kind, 5000)
        assert seqcore.satisfies_recurrence(tab)
        assert list(tab)[:200] == plain_terms(kind.value, 200)


def test_jacobsthal_closed_form():
    for n in range(5001):
        assert 3 * seqcore.term(K.JACOBSTHAL, n) == 2 ** n - (-1) ** n


def test_growth_examples():
    assert seqcore.check_growth(K.PADOVAN, [4]) == [(4, True)]
    assert seqcore.check_growth(K.JACOBSTHAL, [8]) == [(8, True)]
    with pytest.raises(ValueError):
        seqcore.check_growth(K.PERRIN, [1])
    with pytest.raises(ValueError):
        seqcore.check_growth(K.PADOVAN, [0])


def test_growth_ranges():
    for kind in K:
        start = seqcore.GROWTH_START[kind]
        bad = [i for i, ok in seqcore.check_growth(kind, range(start, 1001)) if not ok]
        assert bad == ([3] if kind is K.PADOVAN else [])


def test_monotonicity():
    assert seqcore.is_increasing_from(K.PADOVAN, 5, 2000)
    assert seqcore.is_increasing_from(K.JACOBSTHAL, 3, 2000)
    assert seqcore.is_increasing_from(K.PERRIN, 6, 2000)
    assert not seqcore.is_increasing_from(K.PERRIN, 5, 6)


def test_index_map_keeps_every_index():
    where = seqcore.index_map(seqcore.table(K.JACOBSTHAL, 10))
    assert where[1] == [1, 2]
    assert where[341] == [10]
    assert seqcore.index_map(seqcore.table(K.JACOBSTHAL, 10), limit=1)[1] == [1]


def test_parse():
    assert K.parse("Perrin") is K.PERRIN
    with pytest.raises(ValueError):
        K.parse("lucas")
