from __future__ import annotations

import pytest

from dahalab.daha_deformed import (
    DeformedGenerator,
    app_gamma,
    app_gamma_composed,
    app_varpi,
    app_W,
    app_Ytilde,
    app_Ztilde,
    apply_deformed_generator,
    gamma_closed,
    min_t_order,
    suite_deformed,
    tword_geometric_pair,
)
from dahalab.errors import IndexOutOfRank, SignatureViolation
from dahalab.field import ONE, Q, T, qpow, tpow
from dahalab.polyring import Monomial, Poly, monomials_up_to_degree


def mono(k: int, *pairs: tuple[int, int]) -> Poly:
    return Poly.monomial(Monomial(pairs), k)


def test_varpi_examples():
    # the top variable wraps around to q*x1 and survives the projection
    assert app_varpi(mono(3, (3, 1))) == mono(3, (1, 1)).scale(Q)
    # everything else shifts up one slot, away from x1, and dies
    assert app_varpi(mono(3, (1, 1))) == Poly.zero(3)
    assert app_varpi(mono(3, (2, 1))) == Poly.zero(3)
    # mixed: only the x3-divisible part of x2*x3^2 contributes
    assert app_varpi(mono(3, (2, 1), (3, 2))) == mono(3, (1, 2), (3, 1)).scale(qpow(2))
    assert app_varpi(Poly.one(3)) == Poly.zero(3)
    with pytest.raises(SignatureViolation):
        app_varpi(mono(2, (1, -1)))


def test_gamma_closed_frozen():
    assert app_gamma(mono(3, (2, 1), (3, 1))) == Poly.zero(3)
    assert str(app_gamma(mono(3, (2, 2)))) == "q^2*(1-t)*x1*x2"
    assert str(app_gamma(mono(3, (3, 2)))) == "q^2*(-1+t)*x1*x2"
    assert str(app_gamma(mono(4, (4, 3)))) == "q^3*(-1+t)*x1^2*x2 + q^3*(-1+t)*x1*x2^2"
    # single-power bridges are empty sums
    assert gamma_closed(3, Monomial(((2, 1),))) == Poly.zero(3)
    assert app_gamma(Poly.one(3)) == Poly.zero(3)


def test_gamma_two_routes_match():
    for m in monomials_up_to_degree(3, 3):
        f = Poly.monomial(m, 3)
        assert app_gamma(f) == app_gamma_composed(f), m


def test_deformed_translation_stability():
    """The first deformed translation acts the same way on x1 at every rank,
    and kills constants."""
    for k in (2, 3, 4, 5):
        x1 = mono(k, (1, 1))
        assert app_Ytilde(1, x1) == x1.scale(Q * T)
        assert app_Ytilde(1, Poly.one(k)) == Poly.zero(k)
    with pytest.raises(IndexOutOfRank):
        app_Ytilde(4, mono(3, (1, 1)))


def test_remainder_operator():
    # anything divisible by x1 dies
    for m in monomials_up_to_degree(3, 2):
        f = Poly.monomial(m.mul_var(1, 1), 3)
        assert app_W(1, f) == Poly.zero(3)
    assert app_W(1, Poly.one(3)) == Poly.zero(3)
    # stripping the top variable: weight t^3 - t^2 by index, q^2 by power
    got = app_W(1, mono(3, (2, 1), (3, 2)))
    assert got == mono(3, (1, 2), (2, 1)).scale(tpow(3) * (ONE - tpow(-1)) * qpow(2))
    disp = app_W(1, mono(3, (2, 1), (3, 2)), displayed_exponent=True)
    assert disp == got.scale(tpow(-1))


def test_stabilized_translation_projects():
    from dahalab.polyring import set_var_zero

    k = 3
    for m in monomials_up_to_degree(k, 2):
        f = Poly.monomial(m, k)
        lhs = set_var_zero(k, app_Ztilde(1, f), side="plus")
        rhs = app_Ztilde(1, set_var_zero(k, f, side="plus"))
        assert lhs == rhs, m


def test_generator_dispatch():
    f = mono(3, (2, 2))
    g = apply_deformed_generator(DeformedGenerator("Gamma"), f)
    assert g == app_gamma(f)
    assert apply_deformed_generator(DeformedGenerator("Ztilde", 1), f) == app_Ztilde(1, f)
    with pytest.raises(ValueError):
        apply_deformed_generator(DeformedGenerator("Nope"), f)


@pytest.mark.parametrize("m", [1, 2, 3, 4])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_geometric_sum_identity(m, n):
    lhs, rhs = tword_geometric_pair(m, n)
    assert lhs == rhs


def test_commutator_order_matches_rank():
    f = mono(4, (1, 2))
    comm = app_Ytilde(1, app_Ytilde(2, f)) - app_Ytilde(2, app_Ytilde(1, f))
    assert comm != Poly.zero(4)
    assert min_t_order(comm) == 4


def test_suite_smoke():
    rep = suite_deformed(3, 1)
    assert rep.passed
    growth = next(r for r in rep.identities if "growth" in r.name)
    assert growth.cases == 3 and growth.passed
