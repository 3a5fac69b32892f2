"""Tower representation: arrows, loops, and the relation suite."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dahalab.ddpa import (
    VElement,
    app_dminus,
    app_dplus,
    app_dplus_star,
    apply_arrow,
    apply_loop,
    format_velement,
    identity_specs_atq,
    loop_T,
    loop_Tinv,
    loop_y,
    loop_z,
    suite_Atq,
    y_commutator_word,
)
from dahalab.errors import EmptyRankForDminus, IndexOutOfRank
from dahalab.field import ONE, Q, T, tpow
from dahalab.polyring import Monomial, monomials_up_to_degree
from dahalab.symfunc import SymFunc, partitions_of

Y1 = Monomial.var(1)
Y2 = Monomial.var(2)


def sym(letter: str, *parts: int) -> SymFunc:
    return SymFunc.gen(letter, *parts)


# -- frozen arrow values ------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_lowering_pairs_powers_against_the_kernel(n):
    got = app_dminus(VElement.monomial(Y1.pow(n), 1))
    want = VElement.from_sym(sym("e", n).scale(-ONE if n % 2 else ONE), 0)
    assert got == want
    assert got.rank == 0


def test_lowering_frozen_values():
    # a pure symmetric coefficient still feels the alphabet shift
    assert app_dminus(VElement.from_sym(sym("p", 1), 1)) == VElement.from_sym(
        sym("p", 1).scale(T), 0
    )
    # the arrow always eats the top variable
    assert app_dminus(VElement.monomial(Y2, 2)) == VElement.from_sym(
        sym("p", 1).scale(-ONE), 1
    )
    with pytest.raises(EmptyRankForDminus):
        app_dminus(VElement.one(0))


def test_raising_frozen_values():
    assert app_dplus(VElement.one(0)) == VElement.monomial(Y1, 1).scale(-ONE)
    assert app_dplus_star(VElement.monomial(Y1, 1)) == VElement.monomial(Y2, 2)
    assert app_dplus_star(VElement.one(0)) == VElement.one(1)
    assert app_dplus_star(VElement.monomial(Y2, 2)) == VElement.monomial(
        Monomial.var(3), 3
    )
    # the alphabet shift exposes the new top variable, which wraps with a q
    got = app_dplus_star(VElement.from_sym(sym("p", 1), 0))
    want = VElement.from_sym(sym("p", 1), 1) + VElement.monomial(
        Y1, 1, SymFunc.constant(Q * (T - ONE))
    )
    assert got == want
    triple = app_dplus_star(
        app_dplus_star(app_dplus_star(VElement.monomial(Y1, 1)))
    )
    assert triple == VElement.monomial(Monomial.var(4), 4)


def test_loop_frozen_values():
    assert loop_z(1, VElement.monomial(Y1, 1)) == VElement.monomial(Y1, 1).scale(Q * T)
    assert loop_T(1, VElement.monomial(Y2, 2)) == VElement.monomial(Y1, 2).scale(T)
    got = loop_y(1, VElement.from_sym(sym("p", 1), 1))
    assert got == VElement.monomial(Y1, 1, sym("p", 1))


def test_loop_index_guards():
    F = VElement.one(2)
    with pytest.raises(IndexOutOfRank):
        loop_T(2, F)
    with pytest.raises(IndexOutOfRank):
        loop_y(3, F)
    with pytest.raises(IndexOutOfRank):
        loop_z(0, F)
    with pytest.raises(IndexOutOfRank):
        y_commutator_word(3, F)


def test_arrow_and_loop_dispatchers():
    F = VElement.monomial(Y1, 1)
    assert apply_arrow("Dminus", F) == app_dminus(F)
    assert apply_arrow("Dplus", F) == app_dplus(F)
    assert apply_arrow("DplusStar", F) == app_dplus_star(F)
    G = VElement.monomial(Y2, 2)
    assert apply_loop("T", 1, G) == loop_T(1, G)
    assert apply_loop("Tinv", 1, G) == loop_Tinv(1, G)
    assert apply_loop("y", 2, G) == loop_y(2, G)
    assert apply_loop("z", 1, G) == loop_z(1, G)
    with pytest.raises(ValueError):
        apply_arrow("Dsideways", F)
    with pytest.raises(ValueError):
        apply_loop("w", 1, G)


# -- element plumbing ---------------------------------------------------------


def test_velement_validation_and_arithmetic():
    with pytest.raises(ValueError):
        VElement({Monomial(((1, -1),)): SymFunc.one()}, 1)
    with pytest.raises(IndexOutOfRank):
        VElement({Y2: SymFunc.one()}, 1)
    with pytest.raises(IndexOutOfRank):
        VElement.one(1) + VElement.one(2)
    # nodes never compare equal across ranks, even for "the same" data
    assert VElement.one(1) != VElement.one(2)
    assert not VElement.zero(3)
    F = VElement.monomial(Y1, 1, sym("p", 1))
    assert (F - F).is_zero()
    assert (F + F) == F.scale(2)
    # zero coefficients are dropped on construction
    assert not VElement({Y1: SymFunc.zero()}, 1).terms


def test_mul_y_guards():
    F = VElement.one(1)
    with pytest.raises(IndexOutOfRank):
        F.mul_y(2)
    with pytest.raises(ValueError):
        F.mul_y(1, -1)


# -- the loops against their defining words -----------------------------------


def small_span(k, D=1):
    return [
        VElement.monomial(mono, k, SymFunc.gen("monomial", *lam.parts))
        for mono in monomials_up_to_degree(k, D)
        for w in range(D + 1)
        for lam in partitions_of(w)
    ]


@pytest.mark.parametrize("k", [1, 2])
def test_multiplication_matches_the_commutator_word(k):
    for F in small_span(k):
        for i in range(1, k + 1):
            assert y_commutator_word(i, F) == loop_y(i, F)


def test_rotation_seam_beyond_the_suite():
    """z_1 d_+ = -q t^{k+1} y_1 d_+* pointwise at the two lowest nodes."""
    for k, F in [
        (0, VElement.one(0)),
        (0, VElement.from_sym(sym("p", 1), 0)),
        (1, VElement.monomial(Y1, 1)),
        (1, VElement.monomial(Y1, 1, sym("m", 1))),
    ]:
        lhs = loop_z(1, app_dplus(F))
        rhs = loop_y(1, app_dplus_star(F)).scale(-(Q * tpow(k + 1)))
        assert lhs == rhs


def test_shift_relations_hold_at_the_boundary_index():
    """The arrow/loop shifts keep holding at i = rank, the largest index
    that typechecks, not just below it."""
    for k in (1, 2):
        for F in small_span(k):
            assert app_dplus(loop_z(k, F)) == loop_z(k + 1, app_dplus(F))
            assert app_dplus_star(loop_y(k, F)) == loop_y(k + 1, app_dplus_star(F))


def test_raise_lower_commutator_never_dies_on_symmetric_inputs():
    """[d+, d-] has no kernel among y-free elements of positive degree
    (witnessed on a sample, not proven)."""
    for G in [sym("p", 1), sym("p", 2), sym("m", 1, 1), sym("h", 2)]:
        for k in (1, 2):
            F = VElement.from_sym(G, k)
            comm = app_dplus(app_dminus(F)) - app_dminus(app_dplus(F))
            assert comm


# -- suite and display --------------------------------------------------------


def test_suite_small():
    rep = suite_Atq(2, 1)
    assert rep.passed
    assert rep.suite == "atq"
    names = {r.name for r in rep.identities}
    assert "rotation-seam[k=0]" in names
    assert "y-loop-vs-word,i=1[k=2]" in names
    assert "z-z-comm,i=1,j=2[k=2]" in names
    with pytest.raises(IndexOutOfRank):
        identity_specs_atq(1, 1)


def test_format():
    assert format_velement(VElement.zero(2)) == "0"
    assert format_velement(VElement.from_sym(sym("p", 2), 0)) == "p[2]"
    two_vars = VElement.monomial(Monomial(((1, 2), (2, 1))), 2, sym("p", 2))
    assert format_velement(two_vars) == "y1^2*y2 * p[2]"
    assert format_velement(app_dplus(VElement.one(0))) == "-y1"
    # monomial-basis storage converts to powersums for display
    assert format_velement(VElement.monomial(Y1, 1, sym("m", 1))) == "y1 * p[1]"


# -- property checks ----------------------------------------------------------

_coeffs = st.fractions(min_value=-2, max_value=2, max_denominator=2).filter(bool)


@st.composite
def velements(draw, rank=2):
    n = draw(st.integers(1, 3))
    terms = {}
    for _ in range(n):
        exps = tuple(
            (i, e)
            for i, e in enumerate(draw(st.tuples(st.integers(0, 2), st.integers(0, 2))), 1)
            if e
        )
        parts = draw(st.lists(st.integers(1, 2), max_size=2))
        c = draw(_coeffs)
        G = SymFunc.gen("monomial", *parts).scale(Fraction(c))
        key = Monomial(exps)
        terms[key] = terms.get(key, SymFunc.zero()) + G
    return VElement(terms, rank)


@settings(max_examples=25, deadline=None)
@given(velements())
def test_hecke_roundtrip_and_quadratic(F):
    assert loop_Tinv(1, loop_T(1, F)) == F
    lhs = loop_T(1, loop_T(1, F)) + loop_T(1, F).scale(T - ONE)
    assert lhs == F.scale(T)


@settings(max_examples=15, deadline=None)
@given(velements())
def test_commutator_word_is_multiplication_on_random_elements(F):
    assert y_commutator_word(1, F) == loop_y(1, F)
    assert y_commutator_word(2, F) == loop_y(2, F)
