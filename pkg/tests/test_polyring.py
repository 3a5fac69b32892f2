from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from dahalab.errors import (
    IndexOutOfRank,
    InexactDivision,
    NegativeExponentAtZero,
    SignatureViolation,
)
from dahalab.field import ONE, Q, T, tpow
from dahalab.polyring import (
    Monomial,
    Poly,
    constant_term,
    demazure_lusztig,
    divided_difference_quotient,
    format_poly,
    laurent_box,
    minus_monomials_up_to_degree,
    monomials_of_degree,
    monomials_up_to_degree,
    poly_arith,
    project_pr,
    set_var_zero,
)


def x(i: int, rank: int, e: int = 1) -> Poly:
    return Poly.var(i, rank, e)


def test_arith_examples():
    x1, x2 = x(1, 2), x(2, 2)
    assert poly_arith(x1, x2, "add") == x1 + x2
    assert poly_arith(x1 - x2, x1 + x2, "mul") == x1 * x1 - x2 * x2
    assert poly_arith(x1, x1, "sub").is_zero()


def test_rank_promotion():
    # mixed ranks promote to the larger one
    f = x(1, 1) + x(2, 3)
    assert f.rank == 3
    assert f.coeff(Monomial.var(1)) == ONE


def test_demazure_lusztig_examples():
    x1, x2 = x(1, 2), x(2, 2)
    assert demazure_lusztig(1, +1, x1) == x2 + x1.scale(ONE - T)
    assert demazure_lusztig(1, +1, x1 * x2) == x1 * x2  # symmetric, fixed
    assert demazure_lusztig(1, -1, x1) == x2.scale(tpow(-1))
    assert demazure_lusztig(1, +1, x2) == x1.scale(T)


def test_demazure_lusztig_rank_guard():
    with pytest.raises(IndexOutOfRank):
        demazure_lusztig(2, +1, x(1, 2))
    with pytest.raises(IndexOutOfRank):
        Poly.var(3, 2)


def test_division_remainder_is_a_hard_error():
    with pytest.raises(InexactDivision):
        divided_difference_quotient(x(1, 2), 1, 2)


def test_set_var_zero_examples():
    x1, x2 = x(1, 2), x(2, 2)
    assert set_var_zero(2, x1 + x2) == Poly.var(1, 1)
    assert set_var_zero(2, x1 * x2).is_zero()
    g = x(1, 3) + x(2, 3) + x(3, 3, 2)
    assert set_var_zero(3, g) == x(1, 2) + x(2, 2)
    assert set_var_zero(3, g).rank == 2
    # interior variable keeps the rank
    assert set_var_zero(1, x1 + x2) == Poly.var(2, 2)


def test_set_var_zero_sides():
    inv = x(2, 2, -1) + Poly.one(2)
    assert set_var_zero(2, inv) == Poly.one(1)  # x2^{-1} -> 0
    mixed = x(2, 2, -1) + x(2, 2)
    with pytest.raises(NegativeExponentAtZero):
        set_var_zero(2, mixed)
    with pytest.raises(NegativeExponentAtZero):
        set_var_zero(2, inv, side="plus")
    with pytest.raises(SignatureViolation):
        set_var_zero(2, x(2, 2), side="minus")


def test_project_pr_examples():
    assert project_pr(1, x(1, 2, 2) + x(2, 2)) == x(1, 2, 2)
    assert project_pr(1, Poly.one(1)).is_zero()
    x1, x2 = x(1, 2), x(2, 2)
    assert project_pr(2, x1 * x2 + x1) == x1 * x2
    with pytest.raises(SignatureViolation):
        project_pr(1, x(1, 1, -1))


def test_constant_term_examples():
    assert constant_term(2, x(1, 2) + x(2, 2)) == Poly.var(1, 2)
    assert constant_term(1, x(1, 1, 2)).is_zero()
    f = Poly.constant(3, 2) + x(1, 2) * x(2, 2)
    assert constant_term(1, f) == Poly.constant(3, 2)


def test_print_form():
    x1, x2 = x(1, 2), x(2, 2)
    assert format_poly(demazure_lusztig(1, +1, x1)) == "(1-t)*x1 + x2"
    assert format_poly(x1 * x1 - x2 * x2) == "x1^2 - x2^2"
    assert format_poly(x2.scale(T)) == "t*x2"
    assert format_poly(Poly.zero(2)) == "0"
    assert format_poly(x(1, 1, -1).scale(Q)) == "q*x1^-1"


def test_monomial_generators():
    assert sum(1 for _ in monomials_of_degree(2, 3)) == 4
    assert sum(1 for _ in monomials_up_to_degree(3, 2)) == 10
    assert sum(1 for _ in laurent_box(2, 1)) == 9
    assert all(m.exp(1) <= 0 for m in minus_monomials_up_to_degree(2, 2))


# -- operator identities on spanning sets -------------------------------------

RANKS = (2, 3, 4)


@pytest.mark.parametrize("rank", RANKS)
def test_braid_and_quadratic_on_monomials(rank):
    for m in monomials_up_to_degree(rank, 3):
        f = Poly.monomial(m, rank)
        for i in range(1, rank - 1):
            a = demazure_lusztig(i, +1, demazure_lusztig(i + 1, +1, demazure_lusztig(i, +1, f)))
            b = demazure_lusztig(i + 1, +1, demazure_lusztig(i, +1, demazure_lusztig(i + 1, +1, f)))
            assert a == b
        for i in range(1, rank):
            tf = demazure_lusztig(i, +1, f)
            ttf = demazure_lusztig(i, +1, tf)
            # (T_i - 1)(T_i + t) = 0
            assert ttf == tf.scale(ONE - T) + f.scale(T)


@pytest.mark.parametrize("rank", (2, 3))
def test_inverse_roundtrip_on_laurent_box(rank):
    for m in laurent_box(rank, 2):
        f = Poly.monomial(m, rank)
        for i in range(1, rank):
            assert demazure_lusztig(i, -1, demazure_lusztig(i, +1, f)) == f
            assert demazure_lusztig(i, +1, demazure_lusztig(i, -1, f)) == f


_exps = st.integers(min_value=-2, max_value=2)
_coeffs = st.fractions(min_value=-3, max_value=3, max_denominator=2)


@st.composite
def polys(draw, rank: int = 3):
    table = draw(
        st.dictionaries(st.tuples(*[_exps] * rank), _coeffs, min_size=1, max_size=4)
    )
    terms = {
        Monomial((i + 1, e) for i, e in enumerate(v) if e): c
        for v, c in table.items()
    }
    from dahalab.field import coerce

    return Poly({m: coerce(c) for m, c in terms.items()}, rank)


@settings(max_examples=60, deadline=None)
@given(polys())
def test_dl_is_linear_in_quadratic_relation(f):
    for i in (1, 2):
        tf = demazure_lusztig(i, +1, f)
        assert demazure_lusztig(i, +1, tf) == tf.scale(ONE - T) + f.scale(T)
        assert demazure_lusztig(i, -1, tf) == f


@settings(max_examples=60, deadline=None)
@given(polys())
def test_symmetric_inputs_are_fixed(f):
    for i in (1, 2):
        sym = f + f.swap_vars(i, i + 1)
        assert demazure_lusztig(i, +1, sym) == sym
