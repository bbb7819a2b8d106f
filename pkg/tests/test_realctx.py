from fractions import Fraction

import mpmath
import pytest

from jacobsthal_sums.certified import CertifiedReal

from jacobsthal_sums import seqcore
from jacobsthal_sums.realctx import (ALPHA, BINET_A, Power, Product, Quotient, Sum,
                                     binet_padovan, binet_perrin, descriptor_value, log_height,
                                     make_context, nearest_integer, rational)
from jacobsthal_sums.seqcore import SequenceKind as K


def mp_fraction(x, digits=100):
    return Fraction(mpmath.nstr(x, digits, min_fixed=-10 ** 6, max_fixed=10 ** 6))


def test_envelopes_at_128():
    ctx = make_context(128)
    assert ctx.alpha.gt(Fraction(132, 100)) and ctx.alpha.lt(Fraction(133, 100))
    assert ctx.a.gt(Fraction(72, 100)) and ctx.a.lt(Fraction(73, 100))
    assert ctx.beta_abs.gt(Fraction(86, 100)) and ctx.beta_abs.lt(Fraction(87, 100))
    assert ctx.b_abs.gt(Fraction(24, 100)) and ctx.b_abs.lt(Fraction(25, 100))
    truncated = Fraction("1.3247179572447460259609088544780973")
    assert ctx.alpha.overlaps(CertifiedReal.from_bounds(truncated, truncated + Fraction(1, 10 ** 34), 160))
    assert abs(float(ctx.alpha) - 1.3247179572447460) < 1e-15


def test_fields_match_independent_oracle(root_system):
    alpha, a, tau = root_system
    ctx = make_context(256)
    with mpmath.workdps(120):
        for got, want in ((ctx.alpha, alpha), (ctx.a, a), (ctx.tau, tau),
                          (ctx.beta_abs, 1 / mpmath.sqrt(alpha)),
                          (ctx.b_abs, 1 / mpmath.sqrt(23 * a))):
            lo, hi = got.fraction_bounds()
            w = mp_fraction(want)
            assert lo - Fraction(1, 10 ** 90) <= w <= hi + Fraction(1, 10 ** 90)


@pytest.mark.parametrize("bits", [64, 256, 1024])
def test_radius_and_identities(bits):
    ctx = make_context(bits)
    for name, value in ctx.fields().items():
        assert value.radius <= Fraction(1, 2 ** (bits - 8)), name
    product = ctx.alpha * ctx.beta_abs ** 2
    assert product.contains(1)
    psi = ctx.alpha ** 3 - ctx.alpha - 1
    assert psi.contains(0)
    poly = 23 * ctx.a ** 3 - 23 * ctx.a ** 2 + 6 * ctx.a - 1
    assert poly.contains(0)


def test_doubling_is_contained():
    low, high = make_context(256), make_context(512)
    for name, value in low.fields().items():
        lo, hi = value.fraction_bounds()
        lo2, hi2 = high.fields()[name].fraction_bounds()
        assert lo <= lo2 and hi2 <= hi, name


def test_rejects_low_precision():
    with pytest.raises(ValueError):
        make_context(32)


def test_binet_examples():
    ctx = make_context(256)
    assert abs(binet_padovan(ctx, 10) - 12).lt(ctx.alpha ** -5)
    assert abs(binet_padovan(ctx, 1) - 1).lt(ctx.beta_abs)
    assert abs(binet_perrin(ctx, 8) - 10).le(2 * Fraction(87, 100) ** 8)
    assert abs(binet_perrin(ctx, 0) - 3).le(2)
    assert nearest_integer(binet_padovan(ctx, 100)) == seqcore.term(K.PADOVAN, 100)
    assert nearest_integer(binet_perrin(ctx, 200)) == seqcore.term(K.PERRIN, 200)
    with pytest.raises(ValueError):
        binet_padovan(ctx, 0)


def test_binet_residuals_to_500():
    ctx = make_context(600)
    for k in range(1, 501):
        v = binet_padovan(ctx, k)
        assert nearest_integer(v) == seqcore.term(K.PADOVAN, k)
    # 2|beta|^k < 1/2 from k = 10; below that rounding alpha^k misses R_k at 3, 4, 5, 8, 9.
    misses = [k for k in range(2, 501)
              if nearest_integer(binet_perrin(ctx, k)) != seqcore.term(K.PERRIN, k)]
    assert misses == [3, 4, 5, 8, 9]


def test_nonvanishing_support():
    ctx = make_context(256)
    assert (3 * ctx.b_abs).lt(3)


def test_heights():
    ctx = make_context(256)
    assert log_height(rational(2), ctx).contains(ctx.log2.lo)
    assert log_height(rational(-7, 3), ctx).overlaps(mp_ctx_log(7))
    assert log_height(ALPHA, ctx).overlaps(ctx.log_alpha / 3)
    three_a = Product((rational(3), BINET_A))
    assert log_height(three_a, ctx).overlaps(ctx.log3 + ctx.log23 / 3)
    shifted = Quotient(three_a, Sum(rational(1), Power(rational(2), -5)))
    want = ctx.log3 + ctx.log23 / 3 + 5 * ctx.log2 + ctx.log2
    assert log_height(shifted, ctx).overlaps(want)
    for eta in (rational(2), ALPHA):
        assert log_height(Power(eta, 2), ctx).overlaps(2 * log_height(eta, ctx))
    assert descriptor_value(shifted, ctx).overlaps(3 * ctx.a / (1 + Fraction(1, 32)))
    with pytest.raises(TypeError):
        log_height("beta", ctx)


def mp_ctx_log(n):
    from jacobsthal_sums.certified import certify
    return certify(n, 288).log()
