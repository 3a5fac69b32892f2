"""The polynomial side of the tower, and the transport between the two sides.

Node k here is the space of `AlmostSym` values presented at rank k:
polynomials in x_1..x_k against monomial tails.  The same three arrow
families as in `ddpa` connect neighbouring nodes, built from the limit
operators instead of plethysm in a single alphabet:

  * `partial`       (k -> k+1)  embeds, multiplies by x_{k+1}, pushes the
    new variable down with the Hecke word T_k..T_1 and flips the sign.
  * `partial_star`  (k -> k+1)  shifts every finite variable up one slot
    while the tail's leading variable wraps around to q x_1.
  * `partial_minus` (k -> k-1)  peels the last finite variable: a row
    x_k^n * m_lam[tail_k] is traded for the degree-n vertex-operator image
    of m_lam, read over tail_{k-1}.

The loops of the tower are not new operators: the Hecke loop is
`apply_limit_T`, the multiplication loop is `apply_limit_X`, and the
z-loop is `apply_limit_Y`.  `x_loop_word` and `y_loop_word` rebuild the
last two out of arrow commutators; the relation suite checks that the
words recover the global operators on spanning sets, along with every
relation the `ddpa` suite checks on the other side.

`phi_map` transports a rank-k element across the tower: x_i becomes y_i
and each tail power sum p_r spreads out to p_r[X] / (t^r - 1).  It is a
ring isomorphism node by node, with exact inverse `phi_inv`; the second
suite here checks that it intertwines every arrow and loop.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .asym import (
    AlmostSym,
    _sub_multisets,
    apply_limit_T,
    apply_limit_Tinv,
    apply_limit_X,
    apply_limit_Y,
    embed_rank,
    y1_closed_form,
)
from .ddpa import (
    VElement,
    app_dminus,
    app_dplus,
    app_dplus_star,
    loop_T,
    loop_y,
    loop_z,
)
from .errors import EmptyRankForDminus, IndexOutOfRank, NodeMismatch
from .field import ONE, Q, QtScalar, T, qpow, tpow
from .polyring import Monomial, Poly, monomials_up_to_degree
from .reports import IdentitySpec, Report, register_suite, run_suite
from .symfunc import Partition, SymFunc, convert_basis, partitions_of, vertex_B

__all__ = [
    "PArrow",
    "apply_parrow",
    "partial",
    "partial_star",
    "partial_minus",
    "omega_tilde_inv_word",
    "phi_map",
    "phi_inv",
    "x_loop_word",
    "y_loop_word",
    "identity_specs_quiverrep",
    "identity_specs_isom",
    "suite_quiverrep",
    "suite_isom",
]


ARROW_KINDS = ("Partial", "PartialStar", "PartialMinus")


@dataclass(frozen=True)
class PArrow:
    """A named arrow anchored at one node; `PartialMinus` needs node >= 1."""

    kind: str
    node: int

    def __post_init__(self):
        if self.kind not in ARROW_KINDS:
            raise ValueError(f"unknown arrow kind {self.kind!r}")
        if self.node < 0:
            raise IndexOutOfRank(f"negative node {self.node}")
        if self.kind == "PartialMinus" and self.node < 1:
            raise EmptyRankForDminus("the lowering arrow starts at node 1")

    @property
    def target(self) -> int:
        return self.node - 1 if self.kind == "PartialMinus" else self.node + 1


def apply_parrow(a: PArrow, F: AlmostSym) -> AlmostSym:
    if a.node != F.rank:
        raise NodeMismatch(
            f"arrow anchored at node {a.node} applied to a rank-{F.rank} element"
        )
    if a.kind == "Partial":
        return partial(F)
    if a.kind == "PartialStar":
        return partial_star(F)
    return partial_minus(F)


# -- the three arrows ----------------------------------------------------------


def omega_tilde_inv_word(F: AlmostSym) -> AlmostSym:
    """The rotation word T_1 .. T_{m-1} X_m at the element's own rank m."""
    m = F.rank
    out = apply_limit_X(m, F)
    for i in range(m - 1, 0, -1):
        out = apply_limit_T(i, out)
    return out


def partial(F: AlmostSym) -> AlmostSym:
    """Raise by one node: minus the rotation word after embedding."""
    return -omega_tilde_inv_word(embed_rank(F, F.rank + 1))


def partial_star(F: AlmostSym) -> AlmostSym:
    """Raise by one node, twisting: x_i -> x_{i+1} and tail_k -> tail_{k+1} + q x_1.

    The finite part never meets the new low slot, so no Hecke word is
    needed; each tail power sum p_r either stays a tail power sum (now one
    variable further out) or lands on the wrapped variable as (q x_1)^r.
    """
    k = F.rank
    shift = {i: (i + 1, ONE) for i in range(1, k + 1)}
    acc: dict[Partition, Poly] = {}

    def bump(lam: Partition, f: Poly):
        s = acc.get(lam)
        acc[lam] = f if s is None else s + f

    for lam, fpoly in F.terms.items():
        base = fpoly.promote(k + 1)
        if shift:
            base = base.substitute(shift)
        P = convert_basis(SymFunc.gen("monomial", *lam.parts), "powersum")
        for nu, c0 in P.coeffs.items():
            for kept, w, _, ways in _sub_multisets(nu):
                row = base.mul_var(1, w) if w else base
                tail = SymFunc({kept: c0 * ways * qpow(w)}, "powersum")
                for out_lam, c1 in convert_basis(tail, "monomial").coeffs.items():
                    bump(out_lam, row.scale(c1))
    return AlmostSym(acc, k + 1)


def partial_minus(F: AlmostSym) -> AlmostSym:
    """Lower by one node via the vertex operators.

    Splitting each polynomial part by its x_k-exponent presents F as rows
    g(x_1..x_{k-1}) * x_k^n * m_lam[tail_k]; the row maps to g times the
    degree-n vertex-operator image of m_lam over tail_{k-1}.  Rows without
    x_k are not fixed pointwise -- only their sum over a tail-symmetric
    element is, which the suite checks rather than assumes.
    """
    k = F.rank
    if k < 1:
        raise EmptyRankForDminus("no finite variable left to lower with")
    acc: dict[Partition, Poly] = {}

    def bump(lam: Partition, f: Poly):
        s = acc.get(lam)
        acc[lam] = f if s is None else s + f

    for lam, fpoly in F.terms.items():
        by_n: dict[int, dict[Monomial, QtScalar]] = {}
        for mono, c in fpoly.terms.items():
            by_n.setdefault(mono.exp(k), {})[mono.without(k)] = c
        base = SymFunc.gen("monomial", *lam.parts)
        for n, g in by_n.items():
            row = Poly(g, k - 1)
            for out_lam, c1 in vertex_B(n, base).coeffs.items():
                bump(out_lam, row.scale(c1))
    return AlmostSym(acc, k - 1)


# -- loop words ----------------------------------------------------------------


def _raise_lower_comm(F: AlmostSym) -> AlmostSym:
    return partial(partial_minus(F)) - partial_minus(partial(F))


def _star_lower_comm(F: AlmostSym) -> AlmostSym:
    return partial_star(partial_minus(F)) - partial_minus(partial_star(F))


def x_loop_word(i: int, F: AlmostSym) -> AlmostSym:
    """Multiplication by x_i, rebuilt from the raise/lower commutator."""
    k = F.rank
    if not 1 <= i <= k:
        raise IndexOutOfRank(f"x-word index {i} out of range at rank {k}")
    if i > 1:
        inner = x_loop_word(i - 1, apply_limit_Tinv(i - 1, F))
        return apply_limit_Tinv(i - 1, inner).scale(T)
    H = F
    for j in range(1, k):
        H = apply_limit_T(j, H)
    return _raise_lower_comm(H).scale(ONE / (tpow(k - 1) * (T - ONE)))


def y_loop_word(i: int, F: AlmostSym) -> AlmostSym:
    """The translation operator, rebuilt from the starred commutator."""
    k = F.rank
    if not 1 <= i <= k:
        raise IndexOutOfRank(f"y-word index {i} out of range at rank {k}")
    if i > 1:
        inner = y_loop_word(i - 1, apply_limit_T(i - 1, F))
        return apply_limit_T(i - 1, inner).scale(tpow(-1))
    H = F
    for j in range(1, k):
        H = apply_limit_Tinv(j, H)
    return _star_lower_comm(H).scale(tpow(k) / (ONE - T))


# -- transport across the tower -------------------------------------------------


def _tail_factor(nu: Partition) -> QtScalar:
    c = ONE
    for r in nu.parts:
        c = c * (tpow(r) - ONE)
    return c


def phi_map(F: AlmostSym) -> VElement:
    """Rename x_i to y_i and spread each tail p_r out to p_r[X] / (t^r - 1)."""
    acc: dict[Monomial, SymFunc] = {}
    for lam, fpoly in F.terms.items():
        P = convert_basis(SymFunc.gen("monomial", *lam.parts), "powersum")
        spread = SymFunc(
            {nu: c / _tail_factor(nu) for nu, c in P.coeffs.items()}, "powersum"
        )
        for mono, c0 in fpoly.terms.items():
            add = spread.scale(c0)
            s = acc.get(mono)
            acc[mono] = add if s is None else s + add
    return VElement(acc, F.rank)


def phi_inv(F: VElement) -> AlmostSym:
    """Exact inverse of `phi_map`, at the same node."""
    cols: dict[Partition, dict[Monomial, QtScalar]] = {}
    for mono, G in F.terms.items():
        P = convert_basis(G, "powersum")
        packed = SymFunc(
            {nu: c * _tail_factor(nu) for nu, c in P.coeffs.items()}, "powersum"
        )
        for lam, c0 in convert_basis(packed, "monomial").coeffs.items():
            cols.setdefault(lam, {})[mono] = c0
    return AlmostSym({lam: Poly(g, F.rank) for lam, g in cols.items()}, F.rank)


# -- relation suites -------------------------------------------------------------


def identity_specs_quiverrep(kmax: int, D: int) -> list[IdentitySpec]:
    """The full tower relation list, replayed through the limit operators.

    Same shape as the `ddpa` suite, with (T, raise, star, lower, x, Y) in
    place of (T, d+, d+*, d-, y, z), plus three checks with no counterpart
    there: the raise/lower commutator against (t-1) times the rotation
    word, the starred commutator against the translation's closed form,
    and the loop words recovering the global operators.
    """
    if kmax < 2:
        raise IndexOutOfRank(f"the relation suite needs nodes up to 2, got {kmax}")
    specs: list[IdentitySpec] = []

    def span(k: int) -> Callable[[], Iterable[AlmostSym]]:
        def dom() -> Iterable[AlmostSym]:
            return (
                AlmostSym({lam: Poly({mono: ONE}, k)}, k)
                for mono in monomials_up_to_degree(k, D)
                for w in range(D + 1)
                for lam in partitions_of(w)
            )

        return dom

    for k in range(kmax + 1):
        def add(name: str, anchor: str, check, k=k) -> None:
            specs.append(IdentitySpec(f"{name}[k={k}]", anchor, span(k), check))

        # Hecke relations at a fixed node.
        for i in range(1, k):
            add(
                f"quadratic,i={i}",
                "(T - 1)(T + t) kills every element",
                lambda F, i=i: (
                    apply_limit_T(i, apply_limit_T(i, F))
                    + apply_limit_T(i, F).scale(T - ONE),
                    F.scale(T),
                ),
            )
        for i in range(1, k - 1):
            add(
                f"braid,i={i}",
                "adjacent Hecke operators braid",
                lambda F, i=i: (
                    apply_limit_T(i, apply_limit_T(i + 1, apply_limit_T(i, F))),
                    apply_limit_T(i + 1, apply_limit_T(i, apply_limit_T(i + 1, F))),
                ),
            )
        for i in range(1, k):
            for j in range(i + 2, k):
                add(
                    f"T-comm,i={i},j={j}",
                    "distant Hecke operators commute",
                    lambda F, i=i, j=j: (
                        apply_limit_T(i, apply_limit_T(j, F)),
                        apply_limit_T(j, apply_limit_T(i, F)),
                    ),
                )

        # How the raising/lowering arrows meet the Hecke operators.
        if k >= 2:
            add(
                "lower-square",
                "the doubled lowering arrow absorbs the top Hecke operator",
                lambda F, k=k: (
                    partial_minus(partial_minus(apply_limit_T(k - 1, F))),
                    partial_minus(partial_minus(F)),
                ),
            )
        for i in range(1, k - 1):
            add(
                f"lower-T-comm,i={i}",
                "lowering slides past low Hecke operators",
                lambda F, i=i: (
                    apply_limit_T(i, partial_minus(F)),
                    partial_minus(apply_limit_T(i, F)),
                ),
            )
        add(
            "raise-square",
            "the doubled raising arrow absorbs the bottom Hecke operator",
            lambda F: (
                apply_limit_T(1, partial(partial(F))),
                partial(partial(F)),
            ),
        )
        for i in range(1, k):
            add(
                f"raise-T-shift,i={i}",
                "raising shifts Hecke indices up by one",
                lambda F, i=i: (
                    partial(apply_limit_T(i, F)),
                    apply_limit_T(i + 1, partial(F)),
                ),
            )
        if k >= 2:
            add(
                "lower-commutator-twist",
                "lowering past the raise/lower commutator costs one t",
                lambda F, k=k: (
                    partial_minus(_raise_lower_comm(apply_limit_T(k - 1, F))),
                    _raise_lower_comm(partial_minus(F)).scale(T),
                ),
            )
        if k >= 1:
            add(
                "raise-commutator-twist",
                "raising past the raise/lower commutator costs one t",
                lambda F: (
                    apply_limit_T(1, _raise_lower_comm(partial(F))),
                    partial(_raise_lower_comm(F)).scale(T),
                ),
            )

        # Same block for the twisted raising arrow.
        add(
            "star-square",
            "the doubled twisted-raising arrow absorbs the bottom Hecke operator",
            lambda F: (
                apply_limit_T(1, partial_star(partial_star(F))),
                partial_star(partial_star(F)),
            ),
        )
        for i in range(1, k):
            add(
                f"star-T-shift,i={i}",
                "twisted raising shifts Hecke indices up by one",
                lambda F, i=i: (
                    partial_star(apply_limit_T(i, F)),
                    apply_limit_T(i + 1, partial_star(F)),
                ),
            )
        if k >= 2:
            add(
                "lower-starcommutator-twist",
                "lowering past the twisted commutator costs one t",
                lambda F, k=k: (
                    partial_minus(_star_lower_comm(F)).scale(T),
                    _star_lower_comm(partial_minus(apply_limit_T(k - 1, F))),
                ),
            )
        if k >= 1:
            add(
                "raise-starcommutator-twist",
                "twisted raising past the twisted commutator costs one t",
                lambda F: (
                    _star_lower_comm(partial_star(F)).scale(T),
                    apply_limit_T(1, partial_star(_star_lower_comm(F))),
                ),
            )

        # Arrows shift the loop families (every index that typechecks).
        for i in range(1, k + 1):
            add(
                f"raise-Y-shift,i={i}",
                "raising shifts the translation operators up by one",
                lambda F, i=i: (
                    partial(apply_limit_Y(i, F)),
                    apply_limit_Y(i + 1, partial(F)),
                ),
            )
            add(
                f"star-x-shift,i={i}",
                "twisted raising shifts the multiplications up by one",
                lambda F, i=i: (
                    partial_star(apply_limit_X(i, F)),
                    apply_limit_X(i + 1, partial_star(F)),
                ),
            )
        add(
            "rotation-seam",
            "the translation after raising matches x_1 after twisted raising",
            lambda F, k=k: (
                apply_limit_Y(1, partial(F)),
                apply_limit_X(1, partial_star(F)).scale(-(Q * tpow(k + 1))),
            ),
        )

        # Loop interactions: multiplications.
        for j in range(1, k):
            for i in range(1, k + 1):
                if i in (j, j + 1):
                    continue
                add(
                    f"x-T-comm,i={i},j={j}",
                    "multiplications commute with unrelated Hecke operators",
                    lambda F, i=i, j=j: (
                        apply_limit_X(i, apply_limit_T(j, F)),
                        apply_limit_T(j, apply_limit_X(i, F)),
                    ),
                )
        for i in range(1, k):
            add(
                f"x-rel,i={i}",
                "conjugating a multiplication by inverse Hecke moves it up",
                lambda F, i=i: (
                    apply_limit_X(i + 1, F),
                    apply_limit_Tinv(
                        i, apply_limit_X(i, apply_limit_Tinv(i, F))
                    ).scale(T),
                ),
            )
        for i in range(1, k + 1):
            for j in range(i + 1, k + 1):
                add(
                    f"x-x-comm,i={i},j={j}",
                    "multiplications commute",
                    lambda F, i=i, j=j: (
                        apply_limit_X(i, apply_limit_X(j, F)),
                        apply_limit_X(j, apply_limit_X(i, F)),
                    ),
                )
        for i in range(1, k):
            add(
                f"x-lower-comm,i={i}",
                "low multiplications slide past lowering",
                lambda F, i=i: (
                    apply_limit_X(i, partial_minus(F)),
                    partial_minus(apply_limit_X(i, F)),
                ),
            )
        for i in range(1, k + 1):
            def chk_raise_x(F: AlmostSym, i=i):
                lhs = partial(apply_limit_X(i, F))
                rhs = partial(F)
                for j in range(1, i + 1):
                    rhs = apply_limit_Tinv(j, rhs)
                rhs = apply_limit_X(i, rhs)
                for j in range(i, 0, -1):
                    rhs = apply_limit_T(j, rhs)
                return lhs, rhs

            add(
                f"raise-x-conjugation,i={i}",
                "raising meets a multiplication up to a Hecke conjugation",
                chk_raise_x,
            )
        if k >= 1:
            for i in range(1, k + 1):
                add(
                    f"x-recovered-by-word,i={i}",
                    "the commutator word rebuilds multiplication",
                    lambda F, i=i: (apply_limit_X(i, F), x_loop_word(i, F)),
                )

        # Loop interactions: translations.
        for j in range(1, k):
            for i in range(1, k + 1):
                if i in (j, j + 1):
                    continue
                add(
                    f"Y-T-comm,i={i},j={j}",
                    "translations commute with unrelated Hecke operators",
                    lambda F, i=i, j=j: (
                        apply_limit_Y(i, apply_limit_T(j, F)),
                        apply_limit_T(j, apply_limit_Y(i, F)),
                    ),
                )
        for i in range(1, k):
            add(
                f"Y-rel,i={i}",
                "conjugating a translation by inverse Hecke moves it back down",
                lambda F, i=i: (
                    apply_limit_Y(i, F),
                    apply_limit_Tinv(
                        i, apply_limit_Y(i + 1, apply_limit_Tinv(i, F))
                    ).scale(T),
                ),
            )
        for i in range(1, k + 1):
            for j in range(i + 1, k + 1):
                add(
                    f"Y-Y-comm,i={i},j={j}",
                    "translations commute",
                    lambda F, i=i, j=j: (
                        apply_limit_Y(i, apply_limit_Y(j, F)),
                        apply_limit_Y(j, apply_limit_Y(i, F)),
                    ),
                )
        for i in range(1, k):
            add(
                f"Y-lower-comm,i={i}",
                "low translations slide past lowering",
                lambda F, i=i: (
                    apply_limit_Y(i, partial_minus(F)),
                    partial_minus(apply_limit_Y(i, F)),
                ),
            )
        for i in range(1, k + 1):
            def chk_star_Y(F: AlmostSym, i=i):
                lhs = partial_star(apply_limit_Y(i, F))
                rhs = partial_star(F)
                for j in range(1, i + 1):
                    rhs = apply_limit_T(j, rhs)
                rhs = apply_limit_Y(i, rhs)
                for j in range(i, 0, -1):
                    rhs = apply_limit_Tinv(j, rhs)
                return lhs, rhs

            add(
                f"star-Y-conjugation,i={i}",
                "twisted raising meets a translation up to an inverse conjugation",
                chk_star_Y,
            )
            add(
                f"Y-recovered-by-word,i={i}",
                "the starred commutator word rebuilds the translation",
                lambda F, i=i: (apply_limit_Y(i, F), y_loop_word(i, F)),
            )

        # The two commutator identities with closed right-hand sides.
        if k >= 1:
            add(
                "raise-lower-commutator",
                "the raise/lower commutator is (t-1) times the rotation word",
                lambda F: (
                    _raise_lower_comm(F),
                    omega_tilde_inv_word(F).scale(T - ONE),
                ),
            )
            add(
                "star-lower-commutator",
                "the starred commutator reproduces the translation closed form",
                lambda F, k=k: (
                    _star_lower_comm(F),
                    y1_closed_form(F).scale((ONE - T) * tpow(-k)),
                ),
            )

    return specs


def identity_specs_isom(kmax: int, D: int) -> list[IdentitySpec]:
    """Transport every operator across the tower and compare."""
    if kmax < 2:
        raise IndexOutOfRank(f"the transport suite needs nodes up to 2, got {kmax}")
    specs: list[IdentitySpec] = []

    def span(k: int) -> Callable[[], Iterable[AlmostSym]]:
        def dom() -> Iterable[AlmostSym]:
            return (
                AlmostSym({lam: Poly({mono: ONE}, k)}, k)
                for mono in monomials_up_to_degree(k, D)
                for w in range(D + 1)
                for lam in partitions_of(w)
            )

        return dom

    for k in range(kmax + 1):
        def add(name: str, anchor: str, check, k=k) -> None:
            specs.append(IdentitySpec(f"{name}[k={k}]", anchor, span(k), check))

        for i in range(1, k):
            add(
                f"phi-T,i={i}",
                "transport intertwines the Hecke operators",
                lambda F, i=i: (
                    phi_map(apply_limit_T(i, F)),
                    loop_T(i, phi_map(F)),
                ),
            )
        for i in range(1, k + 1):
            add(
                f"phi-x,i={i}",
                "transport sends multiplication by x_i to the y_i loop",
                lambda F, i=i: (
                    phi_map(apply_limit_X(i, F)),
                    loop_y(i, phi_map(F)),
                ),
            )
            add(
                f"phi-Y,i={i}",
                "transport sends the translation to the z loop",
                lambda F, i=i: (
                    phi_map(apply_limit_Y(i, F)),
                    loop_z(i, phi_map(F)),
                ),
            )
        add(
            "phi-raise",
            "transport intertwines the raising arrows",
            lambda F: (phi_map(partial(F)), app_dplus(phi_map(F))),
        )
        add(
            "phi-star",
            "transport intertwines the twisted raising arrows",
            lambda F: (phi_map(partial_star(F)), app_dplus_star(phi_map(F))),
        )
        if k >= 1:
            add(
                "phi-lower",
                "transport intertwines the lowering arrows",
                lambda F: (phi_map(partial_minus(F)), app_dminus(phi_map(F))),
            )

    return specs


register_suite("quiverrep", identity_specs_quiverrep)
register_suite("isom", identity_specs_isom)


def suite_quiverrep(kmax: int, D: int, jobs: int = 1) -> Report:
    return run_suite("quiverrep", kmax, D, jobs=jobs)


def suite_isom(kmax: int, D: int, jobs: int = 1) -> Report:
    return run_suite("isom", kmax, D, jobs=jobs)
