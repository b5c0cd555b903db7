import json
import random

import pytest

from drinfeldforms.errors import (
    MixedField,
    PrecisionExceeded,
    ZeroSeries,
)
from drinfeldforms.fieldpoly import Poly, RatFunc, make_field
from drinfeldforms.useries import USeries

F3 = make_field(3, 1)
F5 = make_field(5, 1)
F9 = make_field(3, 2)


def u(ctx, prec=12):
    return USeries.monomial(ctx, RatFunc.constant(ctx, 1), 1, prec)


def geometric(ctx, ratio_coeff, step, prec):
    # oracle: sum of (ratio_coeff)^j u^(j*step) written out directly
    terms = {}
    j = 0
    c = RatFunc.constant(ctx, 1)
    while j * step < prec:
        terms[j * step] = c
        c = c * ratio_coeff
        j += 1
    return USeries(ctx, terms, prec)


def rand_series(ctx, rng, val=-3, prec=9):
    T = Poly.T(ctx)
    terms = {}
    for e in range(val, prec):
        if rng.random() < 0.5:
            c = rng.randrange(ctx.q)
            d = rng.randrange(3)
            terms[e] = RatFunc(Poly.from_pairs(ctx, [(d, ctx.element(c))]))
    return USeries(ctx, terms, prec, val=val)


# ---------------------------------------------------------------------------
# ring operations


def test_mul_monomials():
    x = u(F3)
    xinv = USeries.monomial(F3, RatFunc.constant(F3, 1), -1, 10)
    prod = x * xinv
    assert prod.coeff(0).is_one()
    assert all(c.is_zero() for e, c in prod.terms() if e != 0)


def test_mul_difference_of_squares():
    T = Poly.T(F3)
    one = RatFunc.constant(F3, 1)
    f = USeries(F3, {0: one, 1: RatFunc(T)}, 10)
    g = USeries(F3, {0: one, 1: RatFunc(-T)}, 10)
    prod = f * g
    assert prod.coeff(0).is_one()
    assert prod.coeff(1).is_zero()
    assert prod.coeff(2) == RatFunc(-(T * T))


def test_mul_precision_contract():
    one = RatFunc.constant(F3, 1)
    f = USeries(F3, {0: one, 9: one}, 10)       # val 0, prec 10
    g = USeries(F3, {2: one, 4: one}, 5)        # val 2, prec 5
    assert (f * g).prec == 5
    assert (g * f).prec == 5


def test_add_precision_and_cancellation():
    one = RatFunc.constant(F3, 1)
    f = USeries(F3, {1: one, 3: one}, 10)
    g = USeries(F3, {1: -one}, 7)
    s = f + g
    assert s.prec == 7
    assert s.val == 3  # leading terms cancelled, valuation recomputed
    assert s.coeff(3).is_one()


def test_mixed_field_rejected():
    with pytest.raises(MixedField):
        u(F3) + u(F5)
    with pytest.raises(MixedField):
        u(F3) * u(F5)


def test_scale_and_neg():
    T = Poly.T(F3)
    f = u(F3)
    g = f * RatFunc(T)
    assert g.coeff(1) == RatFunc(T)
    assert (-g).coeff(1) == RatFunc(-T)
    assert (g * 0).is_zero()


# ---------------------------------------------------------------------------
# inversion


@pytest.mark.parametrize("ctx", (F3, F5, F9), ids=lambda c: f"q{c.q}")
def test_inverse_geometric_series(ctx):
    q = ctx.q
    T = Poly.T(ctx)
    one = RatFunc.constant(ctx, 1)
    prec = 4 * (q - 1) + 1
    f = USeries(ctx, {0: one, q - 1: RatFunc(T)}, prec)
    inv = f.inverse()
    assert inv == geometric(ctx, RatFunc(-T), q - 1, prec)
    back = f * inv
    assert back.coeff(0).is_one()
    assert all(c.is_zero() for e, c in back.terms() if e != 0)


def test_inverse_one_and_monomial():
    one_series = USeries.one(F3, 8)
    assert one_series.inverse() == one_series
    q = F3.q
    m = USeries.monomial(F3, RatFunc.constant(F3, 1), q - 1, 8)
    inv = m.inverse()
    assert inv.val == 1 - q
    assert inv.coeff(1 - q).is_one()


def test_inverse_relative_precision():
    rng = random.Random(11)
    for _ in range(30):
        f = rand_series(F3, rng)
        if f.is_zero() or f.coeff(f.val).is_zero():
            continue
        inv = f.inverse()
        assert inv.val == -f.val
        prod = f * inv
        rel = f.prec - f.val
        for e in range(0, rel):
            expected = 1 if e == 0 else 0
            assert prod.coeff(e) == RatFunc.constant(F3, expected)


def test_inverse_zero_series_raises():
    with pytest.raises(ZeroSeries):
        USeries.zero(F3, 5).inverse()
    with pytest.raises(ZeroSeries):
        USeries.zero(F3, 5) ** -2


def test_integral_inverse_of_unit_lead_is_integral():
    T = Poly.T(F3)
    f = USeries(F3, {0: RatFunc.constant(F3, -1), 2: RatFunc(T)}, 12)
    assert f.integral
    assert f.inverse().integral


# ---------------------------------------------------------------------------
# powers


def test_pow_zero_is_one():
    f = u(F3)
    p0 = f ** 0
    assert p0.coeff(0).is_one()


def test_pow_monomial_negative():
    x = u(F3, prec=9)
    m = x ** -3
    assert m.val == -3
    assert m.coeff(-3).is_one()


@pytest.mark.parametrize("ctx", (F3, F5), ids=lambda c: f"q{c.q}")
def test_pow_frobenius(ctx):
    # freshman's dream oracle: (u + u^2)^p has exponents scaled by p
    p = ctx.p
    one = RatFunc.constant(ctx, 1)
    f = USeries(ctx, {1: one, 2: one}, 2 * p + 2)
    g = f ** p
    expected = USeries(ctx, {p: one, 2 * p: one}, g.prec)
    assert g == expected


def test_pow_matches_repeated_mul():
    rng = random.Random(23)
    f = rand_series(F3, rng, val=0, prec=8)
    if f.is_zero():
        f = USeries.one(F3, 8)
    acc = f
    for n in range(2, 6):
        acc = acc * f
        assert (f ** n).agrees_with(acc)


# ---------------------------------------------------------------------------
# coefficient access


def test_coeff_inside_window():
    f = USeries.one(F3, 10)
    assert f.coeff(5).is_zero()
    assert f.coeff(-2).is_zero()   # below valuation: known zero


def test_coeff_beyond_precision_raises():
    f = USeries.one(F3, 10)
    with pytest.raises(PrecisionExceeded):
        f.coeff(10)
    with pytest.raises(PrecisionExceeded):
        f.coeff(11)


def test_truncate_contract():
    f = USeries(F3, {1: RatFunc.constant(F3, 1),
                     5: RatFunc.constant(F3, 2)}, 9)
    g = f.truncate(4)
    assert g.prec == 4
    assert g.terms() == [(1, RatFunc.constant(F3, 1))]
    with pytest.raises(PrecisionExceeded):
        f.truncate(12)


# ---------------------------------------------------------------------------
# substitution u -> u(Tz)


@pytest.mark.parametrize("ctx", (F3, F5), ids=lambda c: f"q{c.q}")
def test_substitute_u_geometric(ctx):
    q = ctx.q
    T = Poly.T(ctx)
    prec = 4 * q
    f = u(ctx, prec=prec)
    sub = f.substitute_Tz()
    # oracle: u^q * sum_j (-T)^j u^(j(q-1)), written out directly
    expected = geometric(ctx, RatFunc(-T), q - 1, sub.prec - q).shift(q)
    assert sub.agrees_with(expected)
    assert sub.val == q
    assert sub.prec == q * prec


def test_substitute_fixes_constants():
    c = USeries.one(F3, 7)
    s = c.substitute_Tz()
    assert s.coeff(0).is_one()
    assert all(cf.is_zero() for e, cf in s.terms() if e != 0)


def test_substitute_negative_exponent_exact():
    # u(Tz)^(-1) = (1 + T u^(q-1)) u^(-q)
    q = F3.q
    T = Poly.T(F3)
    f = USeries.monomial(F3, RatFunc.constant(F3, 1), -1, 5)
    s = f.substitute_Tz()
    assert s.coeff(-q).is_one()
    assert s.coeff(-q + (q - 1)) == RatFunc(T)
    for e, _ in s.terms():
        assert e in (-q, -1)


@pytest.mark.parametrize("ctx", (F3, F5), ids=lambda c: f"q{c.q}")
def test_substitute_is_ring_homomorphism(ctx):
    rng = random.Random(37 + ctx.q)
    for _ in range(12):
        f = rand_series(ctx, rng, val=0, prec=6)
        g = rand_series(ctx, rng, val=0, prec=6)
        lhs = (f * g).substitute_Tz()
        rhs = f.substitute_Tz() * g.substitute_Tz()
        assert lhs.agrees_with(rhs)
        lhs = (f + g).substitute_Tz()
        rhs = f.substitute_Tz() + g.substitute_Tz()
        assert lhs.agrees_with(rhs)


def test_substitute_output_precision_capped():
    f = u(F3, prec=10)
    s = f.substitute_Tz(out_prec=12)
    assert s.prec == 12
    with pytest.raises(PrecisionExceeded):
        f.substitute_Tz(out_prec=31)


# ---------------------------------------------------------------------------
# precision soundness, support classes, integrality


def test_precision_soundness_recompute_higher():
    # rerunning a pipeline at higher precision never changes a coefficient
    T = Poly.T(F3)
    one = RatFunc.constant(F3, 1)

    def pipeline(prec):
        f = USeries(F3, {0: one, 2: RatFunc(T)}, prec)
        return (f.inverse() ** 2) * f

    lo = pipeline(10)
    hi = pipeline(25)
    assert hi.agrees_with(lo)


def test_support_class_propagation():
    q = F3.q
    one = RatFunc.constant(F3, 1)
    a = USeries(F3, {1: one, 3: one}, 8, support_class=1)
    b = USeries(F3, {2: one}, 8, support_class=0)
    assert (a * a).support_class == 2 % (q - 1)
    assert (a + a).support_class == 1
    assert (a * b).support_class == 1
    assert a.inverse().support_class == (-1) % (q - 1)
    with pytest.raises(ValueError):
        USeries(F3, {1: one, 2: one}, 8, support_class=1)


def test_integral_flag():
    T = Poly.T(F3)
    f = USeries(F3, {1: RatFunc(T)}, 6)
    assert f.integral
    g = USeries(F3, {1: RatFunc(Poly.one(F3), T)}, 6)
    assert not g.integral
    assert (f * f).integral
    assert (f ** 3).integral


# ---------------------------------------------------------------------------
# serialization


def test_json_shape_and_determinism():
    T = Poly.T(F3)
    f = USeries(F3, {3: RatFunc(-T), 1: RatFunc.constant(F3, 1)}, 10)
    d = f.json_dict()
    assert d == {
        "val": 1,
        "prec": 10,
        "terms": [{"exp": 1, "coeff": "1"}, {"exp": 3, "coeff": "2*T"}],
    }
    assert json.dumps(d, sort_keys=True) == json.dumps(f.json_dict(),
                                                       sort_keys=True)


def test_json_zero_series():
    d = USeries.zero(F3, 4).json_dict()
    assert d["terms"] == []
    assert d["prec"] == 4
