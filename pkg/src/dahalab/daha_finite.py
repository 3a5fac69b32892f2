"""Finite-rank double affine Hecke algebra acting on Laurent polynomials.

Generators act through the standard representation: T_i by Demazure-Lusztig
operators, X_i by multiplication, the rotation omega by the substitution
f |-> f(q^{-1}x_k, x_1, ..., x_{k-1}), and Y_i / the affinized rotation by
explicit words in the others.  Two normalization choices are deliberate and
load-bearing:

* the affinized rotation carries the scalar t^{1-k}, which is exactly what
  makes its two defining words agree as operators (checked in the suites);
* Y_i = t^{1-i} T_{i-1}..T_1 . omega^{-1} . T_{k-1}^{-1}..T_i^{-1}, the
  normalization under which t^k Y_i X_i is compatible with setting x_k = 0
  and the deformed operators satisfy Ytilde_i X_i = t^k Y_i X_i.

The module also owns the eigenvalue combinatorics for the Y operators, an
exact solver for their joint eigenfunctions, and the relation suites.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import IndexOutOfRank, NonGenericEigenspace
from .field import ONE, Q, QtScalar, T, ZERO, qpow, tpow
from .polyring import (
    Monomial,
    Poly,
    demazure_lusztig,
    laurent_box,
    minus_monomials_up_to_degree,
    monomials_of_degree,
    monomials_up_to_degree,
    set_var_zero,
)
from .reports import IdentitySpec, Report, register_suite, run_suite


def app_T(i: int, f: Poly) -> Poly:
    return demazure_lusztig(i, +1, f)


def app_Tinv(i: int, f: Poly) -> Poly:
    return demazure_lusztig(i, -1, f)


def app_omega(f: Poly) -> Poly:
    """f(x_1,...,x_k) -> f(q^{-1}x_k, x_1, ..., x_{k-1})."""
    k = f.rank
    images = {1: (k, qpow(-1))}
    for j in range(2, k + 1):
        images[j] = (j - 1, ONE)
    return f.substitute(images)


def app_omega_inv(f: Poly) -> Poly:
    """f(x_1,...,x_k) -> f(x_2, ..., x_k, q*x_1)."""
    k = f.rank
    images = {k: (1, Q)}
    for j in range(1, k):
        images[j] = (j + 1, ONE)
    return f.substitute(images)


def app_omega_tilde(f: Poly) -> Poly:
    """t^{1-k} T_{k-1}..T_1 x_1^{-1}, the affinized rotation."""
    k = f.rank
    g = f.mul_var(1, -1)
    for i in range(1, k):
        g = app_T(i, g)
    return g.scale(tpow(1 - k))


def app_omega_tilde_inv(f: Poly) -> Poly:
    """T_1..T_{k-1} X_k — the exact inverse of the affinized rotation."""
    k = f.rank
    g = f.mul_var(k, 1)
    for i in range(k - 1, 0, -1):
        g = app_T(i, g)
    return g


def app_Y(i: int, f: Poly) -> Poly:
    k = f.rank
    if not 1 <= i <= k:
        raise IndexOutOfRank(f"Y_{i} not in rank {k}")
    g = f
    for j in range(i, k):
        g = app_Tinv(j, g)
    g = app_omega_inv(g)
    for j in range(1, i):
        g = app_T(j, g)
    return g.scale(tpow(1 - i))


def app_Yinv(i: int, f: Poly) -> Poly:
    k = f.rank
    if not 1 <= i <= k:
        raise IndexOutOfRank(f"Y_{i} not in rank {k}")
    g = f
    for j in range(i - 1, 0, -1):
        g = app_Tinv(j, g)
    g = app_omega(g)
    for j in range(k - 1, i - 1, -1):
        g = app_T(j, g)
    return g.scale(tpow(i - 1))


def app_affine_T0(f: Poly) -> Poly:
    """t^{k-1} X_1 X_k^{-1} T_1^{-1}..T_{k-1}^{-1}..T_1^{-1} (palindrome word)."""
    k = f.rank
    g = f
    for i in list(range(1, k)) + list(range(k - 2, 0, -1)):
        g = app_Tinv(i, g)
    return g.mul_var(k, -1).mul_var(1, 1).scale(tpow(k - 1))


@dataclass(frozen=True)
class FiniteGenerator:
    kind: str  # T|Tinv|X|Xinv|Omega|OmegaInv|OmegaTilde|OmegaTildeInv|Y|Yinv
    index: int = 0


_INDEXED = {"T", "Tinv", "X", "Xinv", "Y", "Yinv"}


def apply_finite_generator(g: FiniteGenerator, f: Poly) -> Poly:
    k = f.rank
    i = g.index
    if g.kind in ("T", "Tinv") and not 1 <= i <= k - 1:
        raise IndexOutOfRank(f"T_{i} not in rank {k}")
    if g.kind in ("X", "Xinv", "Y", "Yinv") and not 1 <= i <= k:
        raise IndexOutOfRank(f"{g.kind}_{i} not in rank {k}")
    if g.kind == "T":
        return app_T(i, f)
    if g.kind == "Tinv":
        return app_Tinv(i, f)
    if g.kind == "X":
        return f.mul_var(i, 1)
    if g.kind == "Xinv":
        return f.mul_var(i, -1)
    if g.kind == "Omega":
        return app_omega(f)
    if g.kind == "OmegaInv":
        return app_omega_inv(f)
    if g.kind == "OmegaTilde":
        return app_omega_tilde(f)
    if g.kind == "OmegaTildeInv":
        return app_omega_tilde_inv(f)
    if g.kind == "Y":
        return app_Y(i, f)
    if g.kind == "Yinv":
        return app_Yinv(i, f)
    raise ValueError(f"unknown generator kind {g.kind!r}")


def apply_word(word: Sequence[FiniteGenerator], f: Poly) -> Poly:
    """Apply a product of generators; the rightmost factor acts first."""
    g = f
    for gen in reversed(word):
        g = apply_finite_generator(gen, g)
    return g


# -- eigenvalue combinatorics --------------------------------------------------


def eigenvalue_e(lam: Sequence[int], i: int, displayed_counting: bool = False) -> QtScalar:
    """q^{lam_i} t^{1 - w(i)} for the i-th Y operator on the lam eigenfunction.

    The default counting takes w(i) = #{j <= i : lam_j <= lam_i}
    + #{j > i : lam_j < lam_i}; it is the one consistent with the
    append-zero stability rule and with direct operator computation.
    `displayed_counting` switches the second count to j <= i for
    side-by-side comparison (see the decision ledger).
    """
    if not 1 <= i <= len(lam):
        raise IndexOutOfRank(f"index {i} outside composition of length {len(lam)}")
    li = lam[i - 1]
    first = sum(1 for j in range(i) if lam[j] <= li)
    if displayed_counting:
        second = sum(1 for j in range(i) if lam[j] < li)
    else:
        second = sum(1 for j in range(i, len(lam)) if lam[j] < li)
    return qpow(li) * tpow(1 - (first + second))


def macdonald_ns(k: int, lam: Sequence[int]) -> Poly:
    """Joint eigenfunction of Y_1..Y_k with leading coefficient 1 at x^lam.

    Exact kernel computation in the monomial span of degree |lam|: the Y
    operators preserve that span, so the joint eigenspace is the null space
    of k stacked linear systems over Q(q,t).  A kernel of dimension other
    than one means the conventions are broken, not that the math failed.
    """
    lam = tuple(lam)
    if len(lam) != k or any(a < 0 for a in lam):
        raise ValueError(f"need a composition of length {k}, got {lam}")
    d = sum(lam)
    basis = list(monomials_of_degree(k, d))
    n = len(basis)
    index = {m: j for j, m in enumerate(basis)}
    rows: list[list[QtScalar]] = []
    for i in range(1, k + 1):
        ev = eigenvalue_e(lam, i)
        images = [app_Y(i, Poly.monomial(m, k)) for m in basis]
        for l, ml in enumerate(basis):
            row = []
            for j in range(n):
                c = images[j].coeff(ml)
                if l == j:
                    c = c - ev
                row.append(c)
            rows.append(row)
    # exact row reduction
    pivots: list[int] = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][col].inverse()
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [v - f * w for v, w in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    if len(free) != 1:
        raise NonGenericEigenspace(
            f"joint eigenspace for {lam} has dimension {len(free)}"
        )
    vec = [ZERO] * n
    vec[free[0]] = ONE
    for rr, col in enumerate(pivots):
        vec[col] = -rows[rr][free[0]]
    lam_mono = Monomial((i + 1, e) for i, e in enumerate(lam) if e)
    lead = vec[index[lam_mono]]
    if not lead:
        raise NonGenericEigenspace(f"x^{lam} coefficient vanishes in the kernel")
    inv = lead.inverse()
    return Poly({basis[j]: vec[j] * inv for j in range(n)}, k)


# -- relation suites -------------------------------------------------------------


def _pi(f: Poly, side: str) -> Poly:
    return set_var_zero(f.rank, f, side=side)


def _chain(f: Poly, *ops: Callable[[Poly], Poly]) -> Poly:
    for op in ops:
        f = op(f)
    return f


def identity_specs_finite(k: int, D: int) -> list[IdentitySpec]:
    if k < 2:
        raise IndexOutOfRank("the finite relation suite needs rank >= 2")

    def dom():
        return (Poly.monomial(m, k) for m in laurent_box(k, D))

    specs: list[IdentitySpec] = []

    def add(name: str, anchor: str, check):
        specs.append(IdentitySpec(name, anchor, dom, check))

    for i in range(1, k - 1):
        add(
            f"braid[{i}]",
            "braid relation for adjacent Demazure-Lusztig operators",
            lambda f, i=i: (
                _chain(f, lambda g: app_T(i, g), lambda g: app_T(i + 1, g), lambda g: app_T(i, g)),
                _chain(f, lambda g: app_T(i + 1, g), lambda g: app_T(i, g), lambda g: app_T(i + 1, g)),
            ),
        )
    for i in range(1, k):
        for j in range(i + 2, k):
            add(
                f"T-comm[{i},{j}]",
                "distant Demazure-Lusztig operators commute",
                lambda f, i=i, j=j: (app_T(i, app_T(j, f)), app_T(j, app_T(i, f))),
            )
    for i in range(1, k):
        add(
            f"quadratic[{i}]",
            "(T - 1)(T + t) = 0",
            lambda f, i=i: (
                app_T(i, app_T(i, f)),
                app_T(i, f).scale(ONE - T) + f.scale(T),
            ),
        )
    for i in range(1, k):
        add(
            f"X-conj[{i}]",
            "t T^{-1} X_i T^{-1} = X_{i+1}",
            lambda f, i=i: (
                app_Tinv(i, app_Tinv(i, f).mul_var(i, 1)).scale(T),
                f.mul_var(i + 1, 1),
            ),
        )
    for i in range(1, k):
        for j in range(1, k + 1):
            if j in (i, i + 1):
                continue
            add(
                f"TX-comm[{i},{j}]",
                "T and a disjoint X commute",
                lambda f, i=i, j=j: (app_T(i, f.mul_var(j, 1)), app_T(i, f).mul_var(j, 1)),
            )
    add(
        "X-comm",
        "multiplication operators commute",
        lambda f: (
            f.mul_var(1, 1).mul_var(min(2, k), 1),
            f.mul_var(min(2, k), 1).mul_var(1, 1),
        ),
    )
    for i in range(1, k):
        add(
            f"Y-conj[{i}]",
            "t^{-1} T Y_i T = Y_{i+1}",
            lambda f, i=i: (
                app_T(i, app_Y(i, app_T(i, f))).scale(tpow(-1)),
                app_Y(i + 1, f),
            ),
        )
    for i in range(1, k):
        for j in range(1, k + 1):
            if j in (i, i + 1):
                continue
            add(
                f"TY-comm[{i},{j}]",
                "T and a disjoint Y commute",
                lambda f, i=i, j=j: (app_T(i, app_Y(j, f)), app_Y(j, app_T(i, f))),
            )
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            add(
                f"YY-comm[{i},{j}]",
                "translation operators commute",
                lambda f, i=i, j=j: (app_Y(i, app_Y(j, f)), app_Y(j, app_Y(i, f))),
            )
    add(
        "XY-cross",
        "Y_1 T_1 X_1 = X_2 Y_1 T_1",
        lambda f: (
            app_Y(1, app_T(1, f.mul_var(1, 1))),
            app_Y(1, app_T(1, f)).mul_var(2, 1),
        ),
    )

    def det_lhs(f: Poly) -> Poly:
        g = f
        for j in range(1, k + 1):
            g = g.mul_var(j, 1)
        return app_Y(1, g)

    def det_rhs(f: Poly) -> Poly:
        g = app_Y(1, f)
        for j in range(1, k + 1):
            g = g.mul_var(j, 1)
        return g.scale(Q)

    add("det-cross", "Y_1 X_1..X_k = q X_1..X_k Y_1", lambda f: (det_lhs(f), det_rhs(f)))

    for i in range(2, k):
        add(
            f"rot-T-conj[{i}]",
            "rotation shifts T indices down",
            lambda f, i=i: (app_omega(app_T(i, f)), app_T(i - 1, app_omega(f))),
        )
    add(
        "rot-sq-T1",
        "squared rotation conjugates T_1 to T_{k-1}",
        lambda f: (
            app_omega(app_omega(app_T(1, f))),
            app_T(k - 1, app_omega(app_omega(f))),
        ),
    )
    for i in range(1, k):
        add(
            f"rot-X[{i}]",
            "rotation shifts multiplication operators down",
            lambda f, i=i: (app_omega(f.mul_var(i + 1, 1)), app_omega(f).mul_var(i, 1)),
        )
    add(
        "rot-X1",
        "rotation wraps X_1 to q^{-1} X_k",
        lambda f: (app_omega(f.mul_var(1, 1)), app_omega(f).mul_var(k, 1).scale(qpow(-1))),
    )

    def otilde_word_b(f: Poly) -> Poly:
        g = f
        for i in range(1, k):
            g = app_Tinv(i, g)
        return g.mul_var(k, -1)

    add(
        "affinized-rotation-words",
        "the two defining words for the affinized rotation agree",
        lambda f: (app_omega_tilde(f), otilde_word_b(f)),
    )
    add(
        "affine-T0-left",
        "conjugating T_{k-1} through the affinized rotation",
        lambda f: (
            app_omega_tilde_inv(app_T(k - 1, app_omega_tilde(f))),
            app_affine_T0(f),
        ),
    )
    add(
        "affine-T0-right",
        "conjugating T_1 through the inverse affinized rotation",
        lambda f: (
            app_omega_tilde(app_T(1, app_omega_tilde_inv(f))),
            app_affine_T0(f),
        ),
    )

    def a_endo_y(i: int, f: Poly) -> Poly:
        g = app_Y(i, f).mul_var(i, 1)
        for j in list(range(1, i)) + list(range(i - 1, 0, -1)):
            g = app_T(j, g)
        return g

    add(
        "squeeze-endo-comm",
        "images of Y_1, Y_2 under the positive-squeeze endomorphism commute",
        lambda f: (
            a_endo_y(1, a_endo_y(2, f)),
            a_endo_y(2, a_endo_y(1, f)),
        ),
    )
    return specs


def identity_specs_projection(k: int, D: int) -> list[IdentitySpec]:
    if k < 3:
        raise IndexOutOfRank("the projection suite needs rank >= 3")

    def plus_dom():
        return (Poly.monomial(m, k) for m in monomials_up_to_degree(k, D))

    def minus_dom():
        return (Poly.monomial(m, k) for m in minus_monomials_up_to_degree(k, D))

    specs: list[IdentitySpec] = []

    def add(name, anchor, domain, check):
        specs.append(IdentitySpec(name, anchor, domain, check))

    # polynomial side
    for i in range(1, k - 1):
        add(
            f"pos-T-comm[{i}]",
            "setting x_k = 0 commutes with interior T",
            plus_dom,
            lambda f, i=i: (_pi(app_T(i, f), "plus"), app_T(i, _pi(f, "plus"))),
        )
    add(
        "pos-T-boundary",
        "at the boundary, T_{k-1}^{-1} degenerates to the transposition",
        plus_dom,
        lambda f: (
            _pi(app_Tinv(k - 1, f), "plus"),
            _pi(f.swap_vars(k - 1, k), "plus"),
        ),
    )

    def pos_kill(f: Poly) -> Poly:
        g = app_omega_tilde_inv(f)
        for i in range(1, k):
            g = app_Tinv(i, g)
        return _pi(g, "plus")

    add(
        "pos-rot-kill",
        "T_{k-1}^{-1}..T_1^{-1} after the inverse affinized rotation dies at x_k=0",
        plus_dom,
        lambda f: (pos_kill(f), Poly.zero(k - 1)),
    )
    add(
        "pos-rot-conj",
        "inverse affinized rotation descends through x_k = 0, up to a factor t",
        plus_dom,
        lambda f: (
            _pi(app_omega_tilde_inv(app_T(k - 1, f)), "plus"),
            app_omega_tilde_inv(_pi(f, "plus")).scale(T),
        ),
    )
    for i in range(1, k):
        add(
            f"pos-X-comm[{i}]",
            "setting x_k = 0 commutes with interior multiplications",
            plus_dom,
            lambda f, i=i: (_pi(f.mul_var(i, 1), "plus"), _pi(f, "plus").mul_var(i, 1)),
        )
    add(
        "pos-X-kill",
        "multiplication by x_k dies at x_k = 0",
        plus_dom,
        lambda f: (_pi(f.mul_var(k, 1), "plus"), Poly.zero(k - 1)),
    )

    # inverse-variable side
    for i in range(1, k - 1):
        add(
            f"neg-T-comm[{i}]",
            "inverse side: x_k = 0 commutes with interior T",
            minus_dom,
            lambda f, i=i: (_pi(app_T(i, f), "minus"), app_T(i, _pi(f, "minus"))),
        )
    add(
        "neg-T-boundary",
        "inverse side boundary degeneration of T_{k-1}",
        minus_dom,
        lambda f: (_pi(app_T(k - 1, f), "minus"), _pi(f.swap_vars(k - 1, k), "minus")),
    )
    add(
        "neg-rot-kill",
        "the affinized rotation dies at x_k^{-1} = 0",
        minus_dom,
        lambda f: (_pi(app_omega_tilde(f), "minus"), Poly.zero(k - 1)),
    )
    add(
        "neg-rot-conj",
        "T_{k-1} times the affinized rotation descends through x_k^{-1} = 0",
        minus_dom,
        lambda f: (
            _pi(app_T(k - 1, app_omega_tilde(f)), "minus"),
            app_omega_tilde(_pi(f, "minus")),
        ),
    )
    for i in range(1, k):
        add(
            f"neg-Xinv-comm[{i}]",
            "inverse side: x_k = 0 commutes with interior inverse multiplications",
            minus_dom,
            lambda f, i=i: (_pi(f.mul_var(i, -1), "minus"), _pi(f, "minus").mul_var(i, -1)),
        )
    add(
        "neg-Xinv-kill",
        "multiplication by x_k^{-1} dies on the inverse side",
        minus_dom,
        lambda f: (_pi(f.mul_var(k, -1), "minus"), Poly.zero(k - 1)),
    )
    for i in range(1, k):
        add(
            f"neg-Y-comm[{i}]",
            "inverse side: Y operators descend as they stand",
            minus_dom,
            lambda f, i=i: (_pi(app_Y(i, f), "minus"), app_Y(i, _pi(f, "minus"))),
        )
    for i in range(1, k):
        add(
            f"pos-tYX[{i}]",
            "t^k Y_i X_i descends to t^{k-1} Y_i X_i at x_k = 0",
            plus_dom,
            lambda f, i=i: (
                _pi(app_Y(i, f.mul_var(i, 1)), "plus").scale(tpow(k)),
                app_Y(i, _pi(f, "plus").mul_var(i, 1)).scale(tpow(k - 1)),
            ),
        )

    def witness_check(_label):
        bound = max(2, D)
        for m in monomials_up_to_degree(k, bound):
            f = Poly.monomial(m, k)
            lhs = _pi(app_Y(1, f), "plus")
            rhs = app_Y(1, _pi(f, "plus"))
            if lhs != rhs:
                return ("witness exists", "witness exists")
        return ("witness exists", "no witness found")

    specs.append(
        IdentitySpec(
            "Y1-incompatibility-witness",
            "plain Y_1 does NOT descend: some monomial distinguishes the ranks",
            lambda: iter([f"plus monomials of degree <= {max(2, D)}"]),
            witness_check,
        )
    )
    return specs


register_suite("finite", identity_specs_finite)
register_suite("projection", identity_specs_projection)


def suite_finite_relations(k: int, D: int, jobs: int = 1) -> Report:
    return run_suite("finite", k, D, jobs=jobs)


def suite_projection_compat(k: int, D: int, jobs: int = 1) -> Report:
    return run_suite("projection", k, D, jobs=jobs)
