from __future__ import annotations

import json

import pytest

from dahalab.daha_finite import (
    FiniteGenerator,
    app_T,
    app_Tinv,
    app_Y,
    app_Yinv,
    app_affine_T0,
    app_omega,
    app_omega_inv,
    app_omega_tilde,
    app_omega_tilde_inv,
    apply_word,
    eigenvalue_e,
    macdonald_ns,
    suite_finite_relations,
    suite_projection_compat,
)
from dahalab.errors import IndexOutOfRank
from dahalab.field import ONE, Q, T, qpow, tpow
from dahalab.polyring import Poly, laurent_box, monomials_up_to_degree, set_var_zero


def x(i: int, rank: int, e: int = 1) -> Poly:
    return Poly.var(i, rank).mul_var(i, e - 1)


# -- single generators ---------------------------------------------------------


def test_hecke_examples():
    k = 2
    assert str(app_T(1, x(2, k))) == "t*x1"
    assert str(app_T(1, x(1, k))) == "(1-t)*x1 + x2"
    assert str(app_Tinv(1, x(1, k))) == "t^-1*x2"
    # symmetric inputs are fixed; x2 - t*x1 spans the -t eigenline
    sym = x(1, k) + x(2, k)
    assert app_T(1, sym) == sym
    alt = x(2, k) - x(1, k).scale(T)
    assert app_T(1, alt) == alt.scale(-T)


def test_rotation_examples():
    k = 3
    assert str(app_omega(x(1, k))) == "q^-1*x3"
    assert app_omega(x(2, k)) == x(1, k)
    prod = x(2, k) * x(3, k)
    assert app_omega_inv(app_omega(prod)) == prod
    # a full cycle of the rotation only rescales, by q^{-deg}
    f = x(1, k) * x(2, k)
    g = f
    for _ in range(k):
        g = app_omega(g)
    assert g == f.scale(qpow(-2))


def test_affinized_rotation_two_words_agree():
    for k in (2, 3):
        for m in laurent_box(k, 1):
            f = Poly.monomial(m, k)
            lhs = app_omega_tilde(f)
            g = f
            for i in range(1, k):
                g = app_Tinv(i, g)
            assert lhs == g.mul_var(k, -1)
            assert app_omega_tilde_inv(lhs) == f


def test_affine_generator_conjugations():
    k = 3
    for m in laurent_box(k, 1):
        f = Poly.monomial(m, k)
        assert app_affine_T0(f) == app_omega_tilde_inv(app_T(k - 1, app_omega_tilde(f)))
        assert app_affine_T0(f) == app_omega_tilde(app_T(1, app_omega_tilde_inv(f)))


def test_word_application_order():
    """The rightmost generator of a word acts first."""
    k = 2
    w = [FiniteGenerator("T", 1), FiniteGenerator("X", 2)]
    # T_1 X_2 x_1 = T_1 (x_1 x_2), and x_1 x_2 is symmetric, hence fixed
    assert apply_word(w, x(1, k)) == x(1, k) * x(2, k)
    with pytest.raises(IndexOutOfRank):
        apply_word([FiniteGenerator("T", 5)], x(1, k))


def test_Y_on_linear_examples():
    assert str(app_Y(1, x(1, 2))) == "q*t^-1*x1"
    # constants are joint eigenvectors with eigenvalue t^{1-i}
    assert app_Y(1, Poly.one(2)) == Poly.one(2)
    assert app_Y(2, Poly.one(2)) == Poly.one(2).scale(tpow(-1))
    # Y inverse really inverts
    for k in (2, 3):
        for m in laurent_box(k, 1):
            f = Poly.monomial(m, k)
            for i in range(1, k + 1):
                assert app_Yinv(i, app_Y(i, f)) == f


# -- eigenvalue combinatorics ----------------------------------------------------


def test_eigenvalue_examples():
    assert eigenvalue_e((0, 1), 1) == ONE
    assert eigenvalue_e((1, 0), 1) == Q * tpow(-1)
    assert eigenvalue_e((1, 0, 0), 1) == Q * tpow(-2)
    assert eigenvalue_e((1, 0, 0), 1, displayed_counting=True) == Q
    with pytest.raises(IndexOutOfRank):
        eigenvalue_e((1, 0), 3)


def test_eigenvalue_append_zero_stability():
    """Appending a zero part multiplies the i-th eigenvalue by t^{-1}
    exactly when the i-th entry is positive."""
    comps = [(1,), (2, 1), (0, 2), (1, 1, 0), (3, 0, 1)]
    for lam in comps:
        ext = lam + (0,)
        for i in range(1, len(lam) + 1):
            ratio = eigenvalue_e(ext, i) / eigenvalue_e(lam, i)
            assert ratio == (tpow(-1) if lam[i - 1] > 0 else ONE)


# -- Macdonald eigenfunctions ----------------------------------------------------


def test_macdonald_frozen_examples():
    assert str(macdonald_ns(2, (1, 0))) == "x1"
    assert str(macdonald_ns(2, (0, 1))) == "q*(1-t)/(q-t)*x1 + x2"
    assert str(macdonald_ns(3, (0, 1, 0))) == "q*(1-t)/(q-t^2)*x1 + x2"


def _compositions(k: int, n: int):
    if k == 0:
        if n == 0:
            yield ()
        return
    for head in range(n + 1):
        for tail in _compositions(k - 1, n - head):
            yield (head,) + tail


@pytest.mark.parametrize("k", [2, 3])
def test_macdonald_joint_eigenfunction(k):
    for n in range(4):
        for lam in _compositions(k, n):
            E = macdonald_ns(k, lam)
            for i in range(1, k + 1):
                assert app_Y(i, E) == E.scale(eigenvalue_e(lam, i)), (lam, i)


# -- projection boundary (see decision ledger) -----------------------------------


def test_plus_projection_boundary_needs_the_inverse():
    """At x_k = 0 the inverse boundary generator degenerates to the
    transposition; the plain one picks up a (1-t) correction on the
    surviving variable and does not."""
    k = 3
    f = x(2, k)
    swapped = f.swap_vars(2, 3)
    pi = lambda g: set_var_zero(k, g, side="plus")
    assert pi(app_Tinv(2, f)) == pi(swapped)
    leftover = x(2, k - 1).scale(ONE - T)
    assert pi(app_T(2, f)) == leftover
    assert leftover != pi(swapped)
    # equivalent phrasing of the same degeneration
    for m in monomials_up_to_degree(k, 2):
        g = Poly.monomial(m, k)
        blend = g.swap_vars(2, 3).scale(T) + g.scale(ONE - T)
        assert pi(app_T(2, g)) == pi(blend)


def test_plus_rotation_conjugation_scalar():
    k = 3
    pi = lambda g: set_var_zero(k, g, side="plus")
    for m in monomials_up_to_degree(k, 2):
        f = Poly.monomial(m, k)
        lhs = pi(app_omega_tilde_inv(app_T(k - 1, f)))
        assert lhs == app_omega_tilde_inv(pi(f)).scale(T)


# -- suites ----------------------------------------------------------------------


def test_finite_suite_small():
    rep = suite_finite_relations(2, 2)
    assert rep.passed
    assert all(r.cases > 0 for r in rep.identities)
    names = {r.name for r in rep.identities}
    assert "quadratic[1]" in names
    assert "det-cross" in names


def test_projection_suite_small():
    rep = suite_projection_compat(3, 1)
    assert rep.passed
    witness = next(r for r in rep.identities if "witness" in r.name)
    assert witness.passed


def test_report_json_shape():
    rep = suite_finite_relations(2, 0)
    data = json.loads(rep.to_json_str())
    assert data["suite"] == "finite"
    assert data["rank"] == 2 and data["degree"] == 0
    assert data["pass"] is True
    entry = data["identities"][0]
    assert set(entry) >= {"name", "anchor", "cases", "failures"}
    assert rep.summary().endswith("PASS")
