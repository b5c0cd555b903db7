import random

import pytest

from drinfeldforms.carlitz import (
    carlitz_map,
    monic_series_sum,
    monics,
    u_sub_a,
)
from drinfeldforms.errors import NotMonic, ZeroInput
from drinfeldforms.fieldpoly import Poly, RatFunc, make_field

F3 = make_field(3, 1)
F5 = make_field(5, 1)
F9 = make_field(3, 2)


def rand_poly(ctx, rng, maxdeg):
    d = rng.randrange(maxdeg + 1)
    cs = [rng.randrange(ctx.q) for _ in range(d + 1)]
    coeffs = [ctx.element([(c // ctx.p ** k) % ctx.p
                           for k in range(ctx.r)]) for c in cs]
    return Poly.from_coeffs(ctx, coeffs)


# ---------------------------------------------------------------------------
# the additive polynomials rho_a


def test_carlitz_map_identity():
    m = carlitz_map(Poly.one(F3))
    assert m.coeffs == (Poly.one(F3),)


def test_carlitz_map_T():
    T = Poly.T(F3)
    m = carlitz_map(T)
    assert m.coeffs == (T, Poly.one(F3))


@pytest.mark.parametrize("ctx", (F3, F5, F9), ids=lambda c: f"q{c.q}")
def test_carlitz_map_T_squared(ctx):
    # compose rho_T with itself by hand: T(TX + X^q) + (TX + X^q)^q
    T = Poly.T(ctx)
    q = ctx.q
    m = carlitz_map(T * T)
    assert m.coeffs == (T * T, T ** q + T, Poly.one(ctx))


def test_carlitz_map_rejects_zero():
    with pytest.raises(ZeroInput):
        carlitz_map(Poly.zero(F3))


def test_carlitz_lowest_and_leading_coefficients():
    rng = random.Random(91)
    for ctx in (F3, F9):
        for _ in range(25):
            a = rand_poly(ctx, rng, 4)
            if a.is_zero():
                continue
            m = carlitz_map(a)
            assert m.coeffs[0] == a
            if a.is_monic():
                assert m.coeffs[-1].is_one()


@pytest.mark.parametrize("ctx", (F3, F5), ids=lambda c: f"q{c.q}")
def test_carlitz_multiplicativity_and_additivity(ctx):
    rng = random.Random(17 + ctx.q)
    for _ in range(100):
        a = rand_poly(ctx, rng, 4)
        b = rand_poly(ctx, rng, 4)
        if a.is_zero() or b.is_zero():
            continue
        assert carlitz_map(a * b) == carlitz_map(a).compose(carlitz_map(b))
        if not (a + b).is_zero():
            ma, mb = carlitz_map(a), carlitz_map(b)
            ms = carlitz_map(a + b)
            n = max(len(ma.coeffs), len(mb.coeffs))
            for i in range(n):
                ca = ma.coeffs[i] if i < len(ma.coeffs) else Poly.zero(ctx)
                cb = mb.coeffs[i] if i < len(mb.coeffs) else Poly.zero(ctx)
                cs = ms.coeffs[i] if i < len(ms.coeffs) else Poly.zero(ctx)
                assert cs == ca + cb


# ---------------------------------------------------------------------------
# u(az)


def test_u_sub_one_is_u():
    f = u_sub_a(Poly.one(F3), 8)
    assert f.val == 1
    assert f.coeff(1).is_one()
    assert all(c.is_zero() for e, c in f.terms() if e != 1)


@pytest.mark.parametrize("ctx", (F3, F5), ids=lambda c: f"q{c.q}")
def test_u_sub_T_geometric(ctx):
    # oracle: u^q * sum_j (-T)^j u^(j(q-1))
    q = ctx.q
    T = Poly.T(ctx)
    prec = 4 * q
    f = u_sub_a(T, prec)
    c = RatFunc.constant(ctx, 1)
    j = 0
    while q + j * (q - 1) < prec:
        assert f.coeff(q + j * (q - 1)) == c
        c = c * RatFunc(-T)
        j += 1
    assert f == u_sub_a(Poly.T(ctx), prec)  # deterministic


def test_u_sub_T_plus_c():
    q = F3.q
    T = Poly.T(F3)
    for c in range(1, 3):
        a = T + c
        f = u_sub_a(a, 3 * q)
        assert f.coeff(q).is_one()
        assert f.coeff(2 * q - 1) == RatFunc(-a)


def test_u_sub_a_requires_monic():
    T = Poly.T(F3)
    with pytest.raises(NotMonic):
        u_sub_a(2 * T, 9)
    with pytest.raises(NotMonic):
        u_sub_a(Poly.zero(F3), 9)


@pytest.mark.parametrize("ctx", (F3, F9), ids=lambda c: f"q{c.q}")
def test_u_sub_a_integral_unit_lead(ctx):
    q = ctx.q
    for deg in range(3):
        for a in monics(ctx, deg):
            f = u_sub_a(a, q ** deg + 2 * (q - 1) + 1)
            assert f.integral
            assert f.val == q ** deg
            assert f.coeff(q ** deg).is_one()


@pytest.mark.parametrize("ctx", (F3, F5), ids=lambda c: f"q{c.q}")
def test_u_sub_Ta_equals_substitution(ctx):
    # two independent routes: build u((Ta)z) directly, or substitute
    # u -> u(Tz) in u(az)
    q = ctx.q
    T = Poly.T(ctx)
    for deg in range(3):
        for a in monics(ctx, deg)[:4]:
            prec = q ** (deg + 1) + 2 * (q - 1) + 1
            direct = u_sub_a(T * a, prec)
            base = u_sub_a(a, (prec + q - 1) // q + 1)
            routed = base.substitute_Tz(out_prec=prec)
            assert direct.agrees_with(routed)


# ---------------------------------------------------------------------------
# monic enumeration


def test_monics_degree_zero_and_one():
    assert monics(F3, 0) == [Poly.one(F3)]
    T = Poly.T(F3)
    assert monics(F3, 1) == [T, T + 1, T + 2]


@pytest.mark.parametrize("ctx", (F3, F5, F9), ids=lambda c: f"q{c.q}")
def test_monics_count(ctx):
    for d in range(3):
        ms = monics(ctx, d)
        assert len(ms) == ctx.q ** d
        assert len({str(m) for m in ms}) == len(ms)
        assert all(m.is_monic() and m.degree == d for m in ms)


def test_monics_deterministic():
    assert [str(m) for m in monics(F9, 1)] == [str(m) for m in monics(F9, 1)]


# ---------------------------------------------------------------------------
# monic sums


def test_monic_sum_weight_a_low_precision():
    # below u^q only a = 1 contributes, giving u itself
    q = F3.q
    s = monic_series_sum(F3, lambda a: a, 1, q)
    assert s.terms() == [(1, RatFunc.constant(F3, 1))]


def test_monic_sum_power_q_minus_1_low_precision():
    # degree-1 monics first contribute at exponent (q-1)q
    q = F3.q
    s = monic_series_sum(F3, lambda a: Poly.one(F3), q - 1, q * (q - 1))
    assert s.terms() == [(q - 1, RatFunc.constant(F3, 1))]


def test_monic_sum_zero_when_prec_too_small():
    s = monic_series_sum(F3, lambda a: a, 3, 3)
    assert s.is_zero()


def test_monic_sum_independent_of_grouping():
    # summing even-degree and odd-degree slices separately gives the same
    # series; exact arithmetic makes any grouping valid
    q = F3.q
    prec = 2 * q ** 2

    def weighted(pred):
        return monic_series_sum(
            F3, lambda a: a if pred(int(a.degree)) else Poly.zero(F3),
            1, prec)

    full = monic_series_sum(F3, lambda a: a, 1, prec)
    even = weighted(lambda d: d % 2 == 0)
    odd = weighted(lambda d: d % 2 == 1)
    assert (even + odd) == full
