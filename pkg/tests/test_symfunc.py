from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dahalab.field import ONE, Q, T
from dahalab.polyring import Monomial, Poly
from dahalab.symfunc import (
    AlphabetExpr,
    BASES,
    MixedElement,
    Partition,
    SymFunc,
    convert_basis,
    exp_pair_ct,
    expand_to_vars,
    h_of_expr,
    h_one_minus_t,
    partitions_of,
    plethysm_substitute,
    vertex_B,
    zee,
)


def m(*parts):
    return SymFunc.gen("monomial", *parts)


def p(*parts):
    return SymFunc.gen("powersum", *parts)


def h(*parts):
    return SymFunc.gen("homogeneous", *parts)


def e(*parts):
    return SymFunc.gen("elementary", *parts)


def test_partition_canonical_form():
    assert Partition((1, 3, 2)).parts == (3, 2, 1)
    assert Partition((2, 0, 1)).parts == (2, 1)
    assert Partition(()).weight() == 0
    with pytest.raises(ValueError):
        Partition((2, -1))


def test_zee():
    assert zee(Partition((1, 1))) == 2
    assert zee(Partition((2,))) == 2
    assert zee(Partition((3, 1, 1))) == 6
    assert len(partitions_of(6)) == 11


def test_convert_examples():
    assert convert_basis(m(1), "powersum") == p(1)
    assert convert_basis(h(2), "elementary") == e(1, 1) - e(2)
    p2m = convert_basis(p(2), "monomial")
    assert p2m == m(2)
    assert Partition((1, 1)) not in p2m.coeffs


def test_convert_round_trips():
    probes = [m(2, 1), h(3, 1), e(2, 2), p(4), m(1) + h(2).scale(Q)]
    for F in probes:
        for b in BASES:
            assert convert_basis(convert_basis(F, b), F.basis) == F


def test_plethysm_examples():
    x1 = Monomial.var(1)
    one_minus_t_x = AlphabetExpr(terms=[(ONE - T, x1)])
    t_minus_one_x = AlphabetExpr(terms=[(T - ONE, x1)])
    sq = Monomial.var(1, 2)
    assert plethysm_substitute(h(2), one_minus_t_x, 1) == MixedElement(
        {sq: SymFunc.constant(ONE - T)}, 1
    )
    assert plethysm_substitute(h(2), t_minus_one_x, 1) == MixedElement(
        {sq: SymFunc.constant(T * (T - ONE))}, 1
    )
    shifted = AlphabetExpr(ONE, [(Q, x1)])  # X + q*x1
    assert plethysm_substitute(h(2), shifted, 1) == (
        MixedElement.from_sym(h(2), 1)
        + MixedElement({x1: h(1).scale(Q)}, 1)
        + MixedElement({sq: SymFunc.constant(Q * Q)}, 1)
    )


def test_h_of_expr():
    x1 = Monomial.var(1)
    anything = AlphabetExpr(Q, [(T, x1)])
    assert h_of_expr(0, anything, 1) == MixedElement.from_sym(SymFunc.one(), 1)
    lin = h_of_expr(1, AlphabetExpr(ONE, [(Q, x1)]).scale(ONE - T), 1)
    assert lin == (
        MixedElement.from_sym(p(1).scale(ONE - T), 1)
        + MixedElement({x1: SymFunc.constant((ONE - T) * Q)}, 1)
    )
    cube = h_of_expr(3, AlphabetExpr(terms=[(ONE - T, x1)]), 1)
    assert cube == MixedElement({Monomial.var(1, 3): SymFunc.constant(ONE - T)}, 1)


def test_expand_to_vars_examples():
    f = expand_to_vars(m(2, 1), 2)
    x1, x2 = Poly.var(1, 2), Poly.var(2, 2)
    assert f == x1 * x1 * x2 + x1 * x2 * x2
    assert expand_to_vars(m(1, 1, 1), 2).is_zero()
    g = expand_to_vars(e(2), 3)
    y1, y2, y3 = (Poly.var(i, 3) for i in (1, 2, 3))
    assert g == y1 * y2 + y1 * y3 + y2 * y3


def test_expand_is_ring_map():
    pairs = [(m(2), m(1)), (m(1, 1), m(1)), (h(2), e(2)), (p(3), m(2, 1))]
    for F, G in pairs:
        assert expand_to_vars(F * G, 3) == expand_to_vars(F, 3) * expand_to_vars(G, 3)


def test_vertex_values():
    for n in range(6):
        assert vertex_B(n, SymFunc.one()) == h_one_minus_t(n)
    assert vertex_B(0, p(1)) == p(1).scale(T)
    assert vertex_B(1, SymFunc.zero()).is_zero()


def test_vertex_recursion_small():
    def binf(F):
        return p(1) * F

    probes = [SymFunc.one(), m(1), m(2), m(1, 1), m(2, 1), m(3), m(1, 1, 1)]
    for n in range(4):
        for F in probes:
            assert binf(vertex_B(n, F)) - vertex_B(n, binf(F)) == vertex_B(n + 1, F)


def test_exp_pair_ct_examples():
    assert exp_pair_ct({3: SymFunc.one()}) == -e(3)
    assert exp_pair_ct({0: SymFunc.one()}) == SymFunc.one()
    assert exp_pair_ct({1: p(1)}) == -(e(1) * p(1))
    with pytest.raises(ValueError):
        exp_pair_ct({-1: SymFunc.one()})


def test_convolution_identity():
    x1 = Monomial.var(1)
    A = AlphabetExpr(ONE - T)
    B = AlphabetExpr(terms=[(Q, x1)])
    for n in range(7):
        lhs = h_of_expr(n, A + B, 1)
        rhs = MixedElement.zero(1)
        for i in range(n + 1):
            rhs = rhs + h_of_expr(i, A, 1) * h_of_expr(n - i, B, 1)
        assert lhs == rhs


def test_plethysm_into_finite_alphabet_matches_expansion():
    # X |-> x1 + x2 + x3 (no infinite part): plethysm is plain evaluation
    A = AlphabetExpr(
        terms=[(ONE, Monomial.var(1)), (ONE, Monomial.var(2)), (ONE, Monomial.var(3))]
    )
    for F in [m(2, 1), h(3), e(2), p(2) * p(1)]:
        assert plethysm_substitute(F, A, 3).poly_part() == expand_to_vars(F, 3)


# -- property tests -----------------------------------------------------------

_parts = st.lists(st.integers(min_value=1, max_value=3), max_size=3).map(
    lambda v: Partition(v)
)
_coeffs = st.fractions(min_value=-3, max_value=3, max_denominator=2)


@st.composite
def symfuncs(draw, basis="monomial"):
    table = draw(st.dictionaries(_parts, _coeffs, max_size=3))
    from dahalab.field import coerce

    return SymFunc({p: coerce(c) for p, c in table.items()}, basis)


@settings(max_examples=50, deadline=None)
@given(symfuncs(), st.sampled_from(BASES))
def test_conversion_round_trip_random(F, b):
    assert convert_basis(convert_basis(F, b), "monomial") == F


@settings(max_examples=50, deadline=None)
@given(symfuncs(), symfuncs(), st.sampled_from(BASES))
def test_conversion_is_linear(F, G, b):
    assert convert_basis(F + G, b) == convert_basis(F, b) + convert_basis(G, b)


@settings(max_examples=30, deadline=None)
@given(symfuncs(), symfuncs())
def test_expand_ring_map_random(F, G):
    assert expand_to_vars(F * G, 3) == expand_to_vars(F, 3) * expand_to_vars(G, 3)
