"""Polynomial-side arrows, the loop words, transport, and both suites."""

import pytest
from hypothesis import given, settings, strategies as st

from dahalab.asym import (
    AlmostSym,
    apply_limit_X,
    apply_limit_Y,
    embed_rank,
    y1_closed_form,
)
from dahalab.ddpa import VElement, app_dminus, app_dplus, app_dplus_star, loop_z
from dahalab.errors import EmptyRankForDminus, IndexOutOfRank, NodeMismatch
from dahalab.field import ONE, Q, T, tpow
from dahalab.polyring import Monomial, Poly, monomials_up_to_degree
from dahalab.quiver import (
    PArrow,
    apply_parrow,
    identity_specs_isom,
    identity_specs_quiverrep,
    omega_tilde_inv_word,
    partial,
    partial_minus,
    partial_star,
    phi_inv,
    phi_map,
    suite_isom,
    suite_quiverrep,
    x_loop_word,
    y_loop_word,
)
from dahalab.symfunc import Partition, SymFunc, h_one_minus_t, partitions_of

Y1 = Monomial.var(1)


def xvar(i: int, rank: int, e: int = 1) -> AlmostSym:
    return AlmostSym.from_poly(Poly.var(i, rank, e))


def row(rank: int, f: Poly, *parts: int) -> AlmostSym:
    return AlmostSym({Partition(parts): f}, rank)


# -- frozen arrow values ------------------------------------------------------


def test_raising_frozen_values():
    assert partial(AlmostSym.one(0)) == -xvar(1, 1)
    assert partial(xvar(1, 1)) == -AlmostSym.from_poly(
        Poly.var(1, 2) * Poly.var(2, 2)
    )
    assert partial_star(xvar(1, 1)) == xvar(2, 2)
    # the tail's leading variable wraps around with a q
    got = partial_star(AlmostSym.from_sym(SymFunc.gen("monomial", 1), 0))
    want = row(1, Poly.one(1), 1) + xvar(1, 1).scale(Q)
    assert got == want


@pytest.mark.parametrize("n", [0, 1, 2, 3, 4])
def test_lowering_pairs_powers_against_the_kernel(n):
    got = partial_minus(xvar(1, 1, n) if n else AlmostSym.one(1))
    assert got == AlmostSym.from_sym(h_one_minus_t(n), 0)
    assert got.rank == 0


def test_lowering_frozen_values():
    got = partial_minus(row(1, Poly.var(1, 1), 1))
    assert got == AlmostSym.from_sym(
        SymFunc.gen("monomial", 1, 1).scale(ONE - tpow(2)), 0
    )
    # same row one node up: the untouched x_1 rides along
    same = partial_minus(row(2, Poly.var(2, 2), 1))
    assert same == AlmostSym.from_sym(
        SymFunc.gen("monomial", 1, 1).scale(ONE - tpow(2)), 1
    )
    with pytest.raises(EmptyRankForDminus):
        partial_minus(AlmostSym.one(0))


def test_lowering_inverts_embedding():
    shapes = [
        AlmostSym.from_sym(SymFunc.gen("monomial", 2), 0),
        AlmostSym.from_sym(SymFunc.gen("monomial", 1, 1), 0),
        row(1, Poly.var(1, 1), 1),
        xvar(1, 1, 2),
    ]
    for G in shapes:
        for k in (G.rank + 1, G.rank + 2):
            got = embed_rank(G, k)
            for _ in range(k - G.rank):
                got = partial_minus(got)
            assert got == G


def test_lowering_is_linear_over_the_kept_variables():
    g1 = Poly.var(1, 1, 2) + Poly.var(1, 1).scale(T)
    g2 = g1.promote(2)
    for F in [row(2, Poly.var(2, 2), 1), row(2, Poly.var(2, 2, 2), 2), xvar(2, 2)]:
        assert partial_minus(F.mul_poly(g2)) == partial_minus(F).mul_poly(g1)


# -- the two closed-form commutators --------------------------------------------


def small_span(k: int, D: int = 1):
    return [
        AlmostSym({lam: Poly({mono: ONE}, k)}, k)
        for mono in monomials_up_to_degree(k, D)
        for w in range(D + 1)
        for lam in partitions_of(w)
    ]


def test_raise_lower_commutator_is_the_rotation_word():
    for k in (1, 2):
        for F in small_span(k):
            lhs = partial(partial_minus(F)) - partial_minus(partial(F))
            assert lhs == omega_tilde_inv_word(F).scale(T - ONE)


def test_star_lower_commutator_is_the_translation_closed_form():
    for k in (1, 2):
        for F in small_span(k):
            lhs = partial_star(partial_minus(F)) - partial_minus(partial_star(F))
            assert lhs == y1_closed_form(F).scale((ONE - T) * tpow(-k))


def test_loop_words_recover_the_global_operators():
    for F in [xvar(1, 1), xvar(1, 2), xvar(2, 2), row(2, Poly.var(1, 2), 1)]:
        for i in range(1, F.rank + 1):
            assert x_loop_word(i, F) == apply_limit_X(i, F)
            assert y_loop_word(i, F) == apply_limit_Y(i, F)
    with pytest.raises(IndexOutOfRank):
        x_loop_word(2, xvar(1, 1))
    with pytest.raises(IndexOutOfRank):
        y_loop_word(0, xvar(1, 1))


# -- the arrow wrapper ----------------------------------------------------------


def test_arrow_type_and_dispatch():
    F = xvar(1, 1)
    assert apply_parrow(PArrow("Partial", 1), F) == partial(F)
    assert apply_parrow(PArrow("PartialStar", 1), F) == partial_star(F)
    assert apply_parrow(PArrow("PartialMinus", 1), F) == partial_minus(F)
    assert PArrow("Partial", 1).target == 2
    assert PArrow("PartialMinus", 3).target == 2
    with pytest.raises(NodeMismatch):
        apply_parrow(PArrow("Partial", 2), F)
    with pytest.raises(ValueError):
        PArrow("Sideways", 1)
    with pytest.raises(IndexOutOfRank):
        PArrow("Partial", -1)
    with pytest.raises(EmptyRankForDminus):
        PArrow("PartialMinus", 0)


# -- transport ------------------------------------------------------------------


def test_transport_frozen_values():
    assert phi_map(xvar(1, 1)) == VElement.monomial(Y1, 1)
    assert phi_map(AlmostSym.one(0)) == VElement.one(0)
    got = phi_map(row(1, Poly.var(1, 1), 1))
    assert got == VElement(
        {Y1: SymFunc.gen("powersum", 1).scale(ONE / (T - ONE))}, 1
    )
    assert phi_inv(VElement.from_sym(SymFunc.gen("powersum", 1), 0)) == (
        AlmostSym.from_sym(SymFunc.gen("monomial", 1), 0).scale(T - ONE)
    )
    assert phi_inv(VElement.monomial(Y1, 1)) == xvar(1, 1)


def test_transport_matches_the_translation_loop():
    # both sides of the seam compute q t y1 independently
    qty1 = VElement.monomial(Y1, 1).scale(Q * T)
    assert phi_map(apply_limit_Y(1, xvar(1, 1))) == qty1
    assert loop_z(1, phi_map(xvar(1, 1))) == qty1
    assert phi_map(partial(AlmostSym.one(0))) == app_dplus(VElement.one(0))


def test_transport_intertwines_the_arrows():
    for F in small_span(1) + small_span(2):
        assert phi_map(partial(F)) == app_dplus(phi_map(F))
        assert phi_map(partial_star(F)) == app_dplus_star(phi_map(F))
        assert phi_map(partial_minus(F)) == app_dminus(phi_map(F))


_coeffs = st.fractions(min_value=-2, max_value=2, max_denominator=2).filter(bool)


@st.composite
def almostsyms(draw, rank=2):
    n = draw(st.integers(min_value=1, max_value=3))
    terms = {}
    for _ in range(n):
        exps = draw(st.tuples(*(st.integers(min_value=0, max_value=2),) * rank))
        mono = Monomial((i + 1, e) for i, e in enumerate(exps) if e)
        parts = draw(
            st.lists(st.integers(min_value=1, max_value=2), max_size=2).map(
                lambda xs: Partition(sorted(xs, reverse=True))
            )
        )
        c = draw(_coeffs)
        f = Poly({mono: ONE * c}, rank)
        terms[parts] = terms.get(parts, Poly.zero(rank)) + f
    return AlmostSym(terms, rank)


@given(almostsyms(), almostsyms())
@settings(max_examples=20, deadline=None)
def test_transport_is_a_ring_map(F, G):
    assert phi_map(F * G) == phi_map(F) * phi_map(G)


@given(almostsyms())
@settings(max_examples=20, deadline=None)
def test_transport_roundtrip(F):
    assert phi_inv(phi_map(F)) == F


# -- suites ---------------------------------------------------------------------


def test_suite_small():
    rep = suite_quiverrep(2, 1)
    assert rep.passed
    names = {r.name for r in rep.identities}
    assert "raise-lower-commutator[k=2]" in names
    assert "star-lower-commutator[k=1]" in names
    assert "x-recovered-by-word,i=1[k=2]" in names
    assert "Y-rel,i=1[k=2]" in names
    rep2 = suite_isom(2, 1)
    assert rep2.passed
    names2 = {r.name for r in rep2.identities}
    assert "phi-raise[k=0]" in names2
    assert "phi-Y,i=2[k=2]" in names2
    with pytest.raises(IndexOutOfRank):
        identity_specs_quiverrep(1, 1)
    with pytest.raises(IndexOutOfRank):
        identity_specs_isom(0, 1)
