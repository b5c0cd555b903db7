import pytest

from drinfeldforms.errors import BadWeight, EmptySpace
from drinfeldforms.fieldpoly import Poly, RatFunc, make_field
from drinfeldforms.forms import FormExpr, basis_series, expand
from drinfeldforms.relations import (
    compute_b_vector,
    corollary_iso_check,
    dual_coeff,
    kernel_oracle,
    phi,
    psi_apply,
    relation_report,
    spans_equal,
    sweep_relations,
)

F3 = make_field(3, 1)
F5 = make_field(5, 1)


# ---------------------------------------------------------------------------
# coefficient functionals


def test_dual_coeff_unit_triangular():
    # a_i*(S_j) vanishes for i < j and is 1 on the diagonal
    series = basis_series(F3, 6, 1, 20)
    for j, f in enumerate(series):
        for i in range(3):
            c = dual_coeff(f, i, 1)
            if i < j:
                assert c.is_zero()
            elif i == j:
                assert c.is_one()


def test_dual_coeff_ET_l():
    for l in (0, 1):
        f = expand(FormExpr.parse(F3, "E_T") ** l, 8)
        assert dual_coeff(f, 0, l).is_one()


def test_dual_coeff_rejects_negative_index():
    f = expand(FormExpr.parse(F3, "E_T"), 8)
    with pytest.raises(ValueError):
        dual_coeff(f, -1, 1)


# ---------------------------------------------------------------------------
# the worked instance q=3, (k, l, N) = (2, 1, 0)


def test_b_vector_worked_example():
    T = Poly.T(F3)
    vec = compute_b_vector(F3, 2, 1, 0, FormExpr.parse(F3, "E_T"))
    assert len(vec.c) == 2
    assert vec.c[0] == RatFunc(-T)
    assert vec.c[1] == RatFunc.constant(F3, -1)


def test_b_vector_annihilates_spanning_form():
    vec = compute_b_vector(F3, 2, 1, 0, FormExpr.parse(F3, "E_T"))
    et = expand(FormExpr.parse(F3, "E_T"), 8)
    assert psi_apply(vec.c, et, 1).is_zero()
    # by hand: -T * a(1) - 1 * a(3) = -T * 1 - (-T) = 0
    assert et.coeff(1).is_one()
    assert et.coeff(3) == RatFunc(-Poly.T(F3))


def test_b_vector_length_contract():
    # output length is r + N + 2
    vec = compute_b_vector(F3, 6, 1, 2, FormExpr.parse(F3, "E_T^3"))
    r = (6 - 2) // 2
    assert len(vec.c) == r + 2 + 2


def test_b_vector_rejects_wrong_weight():
    with pytest.raises(BadWeight):
        compute_b_vector(F3, 2, 1, 0, FormExpr.parse(F3, "E_T^2"))


def test_b_vector_integral_and_supported():
    # coefficients land in F_q[T]; the expansion lives in class 1 - l
    q = F3.q
    for (k, l, N, g) in ((2, 1, 0, "E_T"), (4, 0, 1, "Delta_W"),
                         (4, 1, 1, "Delta_T*E_T")):
        gexpr = FormExpr.parse(F3, g)
        vec = compute_b_vector(F3, k, l, N, gexpr)
        assert all(c.is_integral() for c in vec.c)
        r = (k - 2 * l) // (q - 1)
        expr = (FormExpr.parse(F3, "h") * gexpr
                * FormExpr.parse(F3, "Delta_T") ** (-(r + N + 1))
                * FormExpr.parse(F3, "E_T") ** (-2 * l))
        series = expand(expr, q)
        for e, c in series.terms():
            assert e % (q - 1) == (1 - l) % (q - 1)


# ---------------------------------------------------------------------------
# phi and the kernel oracle


def test_kernel_oracle_worked_example():
    kern = kernel_oracle(F3, 2, 1, 0)
    assert len(kern) == 1
    assert kern[0][0].is_one()
    assert kern[0][1] == RatFunc(Poly.one(F3), Poly.T(F3))


def test_phi_rank_and_span_equality():
    bm = phi(F3, 2, 1, 0)
    assert bm.rank() == 1
    kern = kernel_oracle(F3, 2, 1, 0)
    assert spans_equal(F3, [list(r.c) for r in bm.rows], kern)


def test_phi_single_row_for_N0():
    bm = phi(F3, 4, 0, 0)
    assert len(bm.rows) == 1
    assert bm.labels == ("1",)  # weight-0 source space is the constants


def test_relation_report_shapes():
    rep = relation_report(F3, 4, 1, 1)
    assert rep["report"]["phi_rank"] == 2
    assert rep["report"]["kernel_dim"] == 2
    assert rep["report"]["spans_equal"] is True
    assert rep["report"]["annihilates"] is True
    assert len(rep["phi"]) == 2
    assert all(len(row["b"]) == 4 for row in rep["phi"])


@pytest.mark.parametrize("ctx", (F3, F5), ids=lambda c: f"q{c.q}")
def test_relations_small_sweep(ctx):
    for rep in sweep_relations(ctx, r_max=2, n_max=2):
        assert rep["report"]["phi_rank"] == rep["N"] + 1, rep
        assert rep["report"]["kernel_dim"] == rep["N"] + 1, rep
        assert rep["report"]["spans_equal"] is True, rep
        assert rep["report"]["annihilates"] is True, rep


# ---------------------------------------------------------------------------
# the type-l / type-0 comparison


def test_iso_check_examples():
    rep = corollary_iso_check(F3, 4, 1, 0)
    assert rep["equal"] is True
    assert rep["dim_type_l"] == rep["dim_type_0"] == 1
    # k = 2l with l > 0: the type-0 side is the weight-0 constants
    rep = corollary_iso_check(F3, 2, 1, 0)
    assert rep["equal"] is True


def test_iso_check_grid():
    for l in (0, 1):
        for k in range(1, 13):
            if (k - 2 * l) % 2 or k - 2 * l < 0:
                continue
            for N in range(4):
                rep = corollary_iso_check(F3, k, l, N)
                assert rep["equal"] is True, rep


def test_iso_check_empty_space():
    with pytest.raises(EmptySpace):
        corollary_iso_check(F3, 3, 1, 0)
