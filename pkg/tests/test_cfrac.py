from fractions import Fraction
from math import gcd

import pytest

from jacobsthal_sums.certified import CertifiedReal, certify
from jacobsthal_sums.cfrac import (ExpansionError, RealDescriptor,
                                   convergents, expand, first_denominator_exceeding,
                                   legendre_partial_quotient_bound, mu_descriptor,
                                   nearest_int_distance, parse_descriptor, rational_descriptor,
                                   tau_descriptor)
from jacobsthal_sums.problems import Problem
from jacobsthal_sums.realctx import make_context

from conftest import mp_cf, mp_root_system


@pytest.fixture(scope="module")
def tau_cf():
    return expand(tau_descriptor(), 200)


def test_first_quotients(tau_cf):
    cf = expand(tau_descriptor(), 2)
    assert cf.partial_quotients[:2] == (0, 2)
    c = convergents(expand(tau_descriptor(), 3))[2]
    assert (c.p, c.q) == (2, 5)
    assert abs(tau_cf.value_descriptor(256) - Fraction(2, 5)).lt(Fraction(1, 50))


def test_quotients_match_mpmath_oracle(tau_cf):
    _, _, tau = mp_root_system(dps=400)
    oracle = mp_cf(tau, 200, dps=400)
    assert list(tau_cf.partial_quotients[:200]) == oracle


def test_rational_terminates():
    cf = expand(rational_descriptor(Fraction(1, 2)), 10)
    assert cf.partial_quotients == (0, 2) and cf.terminated
    assert [(c.p, c.q) for c in convergents(cf)] == [(0, 1), (1, 2)]
    assert expand(rational_descriptor(Fraction(355, 113)), 1).partial_quotients == (3, 7, 16)


def test_expand_rejects_bad_count():
    with pytest.raises(ValueError):
        expand(tau_descriptor(), 0)


def test_precision_ceiling_reports_index():
    # an enclosure that never narrows validates only a few quotients
    wide = RealDescriptor("wide", lambda bits: CertifiedReal.from_bounds(
        Fraction(1, 3), Fraction(1, 3) + Fraction(1, 10 ** 6), 64))
    with pytest.raises(ExpansionError) as info:
        expand(wide, 50, precision_bits=64, max_precision_bits=256)
    assert info.value.index < 50


def test_stability_under_doubling(tau_cf):
    again = expand(tau_descriptor(), 200, precision_bits=8192)
    n = tau_cf.validated_count
    assert again.partial_quotients[:n] == tau_cf.partial_quotients[:n]


def test_convergent_laws(tau_cf):
    convs = convergents(tau_cf)[:90]
    tau = tau_descriptor()(20000)
    for prev, cur in zip(convs, convs[1:]):
        i = cur.index
        assert cur.p * prev.q - prev.p * cur.q == (-1) ** (i - 1)
        if i >= 2:
            assert cur.q > prev.q
    for c in convs:
        assert gcd(c.p, c.q) == 1
        err = tau - Fraction(c.p, c.q)
        assert abs(err).lt(Fraction(1, c.q * c.q))
        # signs alternate: even convergents below, odd above
        assert err.gt(0) if c.index % 2 == 0 else err.lt(0)


def test_reference_denominators(tau_cf):
    convs = convergents(tau_cf)
    forty = Problem.PADOVAN.data.published.round1_q
    thirty_five = Problem.PADOVAN.data.published.round2_q
    assert 35 <= len(str(convs[85].q)) <= 41
    assert convs[86].q == forty
    assert convs[81].q == thirty_five


def test_first_denominator_exceeding(tau_cf):
    c = first_denominator_exceeding(tau_cf, 6 * 6 * 10 ** 31)
    assert c.q > 36 * 10 ** 31 and convergents(tau_cf)[c.index - 1].q <= 36 * 10 ** 31
    assert c.index == 75
    first = first_denominator_exceeding(tau_cf, 1)
    assert (first.p, first.q) == (1, 2)
    assert first_denominator_exceeding(tau_cf, 6 * 9 * 10 ** 29).q > 54 * 10 ** 29
    short = expand(tau_descriptor(), 5)
    assert first_denominator_exceeding(short, 10 ** 40).q > 10 ** 40
    with pytest.raises(ValueError):
        first_denominator_exceeding(tau_cf, 0)


def test_nearest_int_distance():
    assert nearest_int_distance(certify(Fraction(3, 10), 64)).contains(Fraction(3, 10))
    assert nearest_int_distance(certify(Fraction(15, 2), 64)).contains(Fraction(1, 2))
    assert nearest_int_distance(certify(Fraction(-27, 10), 64)).contains(Fraction(3, 10))
    tau = tau_descriptor()(4096)
    q85 = convergents(expand(tau_descriptor(), 90))[85].q
    d = nearest_int_distance(tau * q85)
    assert d.gt(0) and d.lt(Fraction(1, 2))


def test_legendre_bracket(tau_cf):
    b = legendre_partial_quotient_bound(tau_cf, 9 * 10 ** 29)
    convs = convergents(tau_cf)
    assert convs[b.index_low].q <= 9 * 10 ** 29 < convs[b.index_high].q
    assert b.b_max == 80
    assert (b.index_low, b.index_high) == (68, 69)
    small = legendre_partial_quotient_bound(tau_cf, 1)
    assert (small.index_low, small.index_high) == (0, 1)


def test_mu_descriptors():
    assert mu_descriptor("3", 1).exact == 1
    assert mu_descriptor("3").exact is None
    ctx = make_context(256)
    v = mu_descriptor("3a", 4)(256)
    assert v.overlaps((3 * ctx.a * Fraction(16, 17)).log() / ctx.log2)
    with pytest.raises(ValueError):
        mu_descriptor("5")
    assert parse_descriptor("mu:perrin:1").exact == 1
    assert parse_descriptor("7/3").exact == Fraction(7, 3)
    assert parse_descriptor("tau").name == tau_descriptor().name
    with pytest.raises(ValueError):
        parse_descriptor("pi")
