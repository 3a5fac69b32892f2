"""A tower of spaces linked by raising and lowering arrows, with loops.

Node k of the tower is V_k = spans of  (monomial in y_1..y_k) * F[X]  with F a
symmetric function over the single infinite alphabet X; node 0 is plain
symmetric functions.  Three arrow families move along the tower:

  * `app_dminus`  (k -> k-1)  substitutes X -> X - (t-1) y_k into the
    symmetric part and then pairs the total y_k-power against the Cauchy
    kernel Exp[-y_k^{-1} X], keeping the constant term.
  * `app_dplus`   (k -> k+1)  substitutes X -> X + (t-1) y_{k+1}, multiplies
    by the new variable, pushes it down with the Hecke word T_1..T_k and
    flips the sign.
  * `app_dplus_star` (k -> k+1) makes the same substitution and then rotates
    the variables: y_i -> y_{i+1}, with the new top variable wrapping around
    to q y_1.

At a fixed node, `loop_T` is the Demazure-Lusztig operator in the
y-variables, `loop_y` multiplies by y_i, and `loop_z` is the word
(t^k/(1-t)) [d+*, d-] T_{k-1}^{-1}..T_1^{-1} conjugated up to index i.  The
multiplication loops have their own commutator word (`y_commutator_word`);
the relation suite checks that the two agree on spanning sets, along with
every defining relation of the tower and all four loop-interaction blocks.

Elements print with the symmetric part in the powersum basis, e.g.
"y1^2*y2 * p[2]".
"""

from __future__ import annotations

from typing import Callable, Iterable, Mapping

from .errors import EmptyRankForDminus, IndexOutOfRank
from .field import ONE, Q, QtScalar, T, qpow, tpow
from .polyring import MONE, Monomial, Poly, demazure_lusztig, monomials_up_to_degree
from .reports import IdentitySpec, Report, register_suite, run_suite
from .symfunc import (
    AlphabetExpr,
    MixedElement,
    Partition,
    SymFunc,
    convert_basis,
    exp_pair_ct,
    format_mixed,
    partitions_of,
    plethysm_substitute,
)

__all__ = [
    "VElement",
    "apply_arrow",
    "apply_loop",
    "app_dminus",
    "app_dplus",
    "app_dplus_star",
    "loop_T",
    "loop_Tinv",
    "loop_y",
    "loop_z",
    "y_commutator_word",
    "identity_specs_atq",
    "suite_Atq",
    "format_velement",
]


class VElement:
    """One member of a tower node: a y-polynomial with symmetric coefficients.

    `terms` maps plus monomials in y_1..y_rank to symmetric functions in X;
    zero coefficients are dropped on construction.  Different nodes never
    compare equal -- there is no implicit embedding between them.
    """

    __slots__ = ("rank", "terms")

    def __init__(self, terms: Mapping[Monomial, SymFunc], rank: int):
        if rank < 0:
            raise IndexOutOfRank(f"negative node {rank}")
        clean: dict[Monomial, SymFunc] = {}
        for mono, F in terms.items():
            if not F:
                continue
            if not mono.is_plus():
                raise ValueError(f"negative y-exponent in {mono!r}")
            if mono.max_index() > rank:
                raise IndexOutOfRank(f"monomial {mono!r} does not fit node {rank}")
            clean[mono] = F
        self.rank = rank
        self.terms = clean

    @staticmethod
    def zero(rank: int) -> "VElement":
        return VElement({}, rank)

    @staticmethod
    def one(rank: int) -> "VElement":
        return VElement({MONE: SymFunc.one()}, rank)

    @staticmethod
    def from_sym(F: SymFunc, rank: int) -> "VElement":
        return VElement({MONE: F}, rank)

    @staticmethod
    def monomial(mono: Monomial, rank: int, F: SymFunc | None = None) -> "VElement":
        return VElement({mono: SymFunc.one() if F is None else F}, rank)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VElement):
            return NotImplemented
        return self.rank == other.rank and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: "VElement") -> "VElement":
        if self.rank != other.rank:
            raise IndexOutOfRank(
                f"cannot add elements of nodes {self.rank} and {other.rank}"
            )
        acc = dict(self.terms)
        for mono, F in other.terms.items():
            s = acc.get(mono)
            acc[mono] = F if s is None else s + F
        return VElement(acc, self.rank)

    def __neg__(self) -> "VElement":
        return self.scale(-ONE)

    def __sub__(self, other: "VElement") -> "VElement":
        return self + (-other)

    def scale(self, c) -> "VElement":
        return VElement(
            {m: F.scale(c) for m, F in self.terms.items()}, self.rank
        )

    def mul_y(self, i: int, e: int = 1) -> "VElement":
        if not 1 <= i <= self.rank:
            raise IndexOutOfRank(f"y_{i} not in node {self.rank}")
        if e < 0:
            raise ValueError("y-exponents must stay nonnegative")
        return VElement(
            {m.mul_var(i, e): F for m, F in self.terms.items()}, self.rank
        )

    def __mul__(self, other: "VElement") -> "VElement":
        if self.rank != other.rank:
            raise IndexOutOfRank(
                f"cannot multiply elements of nodes {self.rank} and {other.rank}"
            )
        acc: dict[Monomial, SymFunc] = {}
        for m1, F1 in self.terms.items():
            for m2, F2 in other.terms.items():
                key = m1.mul(m2)
                prod = F1 * F2
                s = acc.get(key)
                acc[key] = prod if s is None else s + prod
        return VElement(acc, self.rank)

    def __repr__(self) -> str:
        return format_velement(self)


# -- moving between the y-polynomial picture and per-partition polynomials ---


def _split(F: VElement) -> dict[Partition, Poly]:
    """Regroup by partition so y-operators can act on ordinary polynomials."""
    cols: dict[Partition, dict[Monomial, QtScalar]] = {}
    for mono, G in F.terms.items():
        for lam, c in convert_basis(G, "monomial").coeffs.items():
            cols.setdefault(lam, {})[mono] = c
    return {lam: Poly(tbl, F.rank) for lam, tbl in cols.items()}


def _join(cols: Mapping[Partition, Poly], rank: int) -> VElement:
    acc: dict[Monomial, SymFunc] = {}
    for lam, f in cols.items():
        for mono, c in f.terms.items():
            add = SymFunc({lam: c}, "monomial")
            s = acc.get(mono)
            acc[mono] = add if s is None else s + add
    return VElement(acc, rank)


# -- loops --------------------------------------------------------------------


def loop_T(i: int, F: VElement, direction: int = +1) -> VElement:
    """Demazure-Lusztig in the y-variables, coefficientwise in X."""
    if not 1 <= i <= F.rank - 1:
        raise IndexOutOfRank(f"T_{i} needs node >= {i + 1}, got {F.rank}")
    return _join(
        {lam: demazure_lusztig(i, direction, f) for lam, f in _split(F).items()},
        F.rank,
    )


def loop_Tinv(i: int, F: VElement) -> VElement:
    return loop_T(i, F, -1)


def loop_y(i: int, F: VElement) -> VElement:
    return F.mul_y(i)


def loop_z(i: int, F: VElement) -> VElement:
    """The second loop family, built as a word.

    z_1 = (t^k/(1-t)) [d+*, d-] T_{k-1}^{-1}..T_1^{-1}  (rightmost acts
    first), and z_{i+1} = t^{-1} T_i z_i T_i.
    """
    k = F.rank
    if not 1 <= i <= k:
        raise IndexOutOfRank(f"z_{i} not in node {k}")
    if i > 1:
        return loop_T(i - 1, loop_z(i - 1, loop_T(i - 1, F))).scale(tpow(-1))
    H = F
    for j in range(1, k):
        H = loop_Tinv(j, H)
    comm = app_dplus_star(app_dminus(H)) - app_dminus(app_dplus_star(H))
    return comm.scale(tpow(k) / (ONE - T))


def y_commutator_word(i: int, F: VElement) -> VElement:
    """The word form of the multiplication loop y_i.

    y_1 = (1/(t^{k-1}(t-1))) [d+, d-] T_{k-1}..T_1 and each further index
    conjugates: y_{i+1} = t T_i^{-1} y_i T_i^{-1}.  The relation suite pits
    this against plain multiplication.
    """
    k = F.rank
    if not 1 <= i <= k:
        raise IndexOutOfRank(f"y_{i} not in node {k}")
    if i > 1:
        inner = y_commutator_word(i - 1, loop_Tinv(i - 1, F))
        return loop_Tinv(i - 1, inner).scale(T)
    H = F
    for j in range(1, k):
        H = loop_T(j, H)
    comm = app_dplus(app_dminus(H)) - app_dminus(app_dplus(H))
    return comm.scale(ONE / (tpow(k - 1) * (T - ONE)))


# -- arrows -------------------------------------------------------------------


def app_dminus(F: VElement) -> VElement:
    """Lowering arrow: node k -> k-1.

    Substitutes X -> X - (t-1) y_k coefficientwise, then replaces each total
    y_k-power n by its pairing against Exp[-y_k^{-1} X].
    """
    k = F.rank
    if k < 1:
        raise EmptyRankForDminus("the lowering arrow needs at least one y-variable")
    A = AlphabetExpr(ONE, [(ONE - T, Monomial.var(k))])
    buckets: dict[Monomial, dict[int, SymFunc]] = {}
    for mono, G in F.terms.items():
        for m2, H in plethysm_substitute(G, A, k).terms.items():
            mm = mono.mul(m2)
            slot = buckets.setdefault(mm.without(k), {})
            n = mm.exp(k)
            s = slot.get(n)
            slot[n] = H if s is None else s + H
    return VElement({rest: exp_pair_ct(P) for rest, P in buckets.items()}, k - 1)


def app_dplus(F: VElement) -> VElement:
    """Raising arrow: node k -> k+1.

    X -> X + (t-1) y_{k+1} coefficientwise, multiply by y_{k+1}, apply
    T_1..T_k (T_k acts first), negate.
    """
    k = F.rank
    A = AlphabetExpr(ONE, [(T - ONE, Monomial.var(k + 1))])
    acc: dict[Monomial, SymFunc] = {}
    for mono, G in F.terms.items():
        for m2, H in plethysm_substitute(G, A, k + 1).terms.items():
            mm = mono.mul(m2).mul_var(k + 1, 1)
            s = acc.get(mm)
            acc[mm] = H if s is None else s + H
    out = VElement(acc, k + 1)
    for i in range(k, 0, -1):
        out = loop_T(i, out)
    return -out


def app_dplus_star(F: VElement) -> VElement:
    """Twisted raising arrow: node k -> k+1.

    X -> X + (t-1) y_{k+1} coefficientwise, then rotate: y_i -> y_{i+1} for
    i <= k while y_{k+1} wraps around to q y_1.
    """
    k = F.rank
    A = AlphabetExpr(ONE, [(T - ONE, Monomial.var(k + 1))])
    rot = {i: i + 1 for i in range(1, k + 1)}
    rot[k + 1] = 1
    acc: dict[Monomial, SymFunc] = {}
    for mono, G in F.terms.items():
        for m2, H in plethysm_substitute(G, A, k + 1).terms.items():
            mm = mono.mul(m2)
            e = mm.exp(k + 1)
            if e:
                H = H.scale(qpow(e))
            key = mm.relabel(rot)
            s = acc.get(key)
            acc[key] = H if s is None else s + H
    return VElement(acc, k + 1)


ARROWS = ("Dplus", "Dminus", "DplusStar")


def apply_arrow(kind: str, F: VElement) -> VElement:
    if kind == "Dplus":
        return app_dplus(F)
    if kind == "Dminus":
        return app_dminus(F)
    if kind == "DplusStar":
        return app_dplus_star(F)
    raise ValueError(f"unknown arrow kind {kind!r}")


def apply_loop(kind: str, i: int, F: VElement) -> VElement:
    if kind == "T":
        return loop_T(i, F)
    if kind == "Tinv":
        return loop_Tinv(i, F)
    if kind == "y":
        return loop_y(i, F)
    if kind == "z":
        return loop_z(i, F)
    raise ValueError(f"unknown loop kind {kind!r}")


# -- the relation suite -------------------------------------------------------


def _comm(F: VElement) -> VElement:
    """[d+, d-] at the node of F (rank is preserved)."""
    return app_dplus(app_dminus(F)) - app_dminus(app_dplus(F))


def _scomm(F: VElement) -> VElement:
    """[d+*, d-] at the node of F."""
    return app_dplus_star(app_dminus(F)) - app_dminus(app_dplus_star(F))


def identity_specs_atq(kmax: int, D: int) -> list[IdentitySpec]:
    """Every defining relation of the tower, at every node up to kmax.

    Spanning set per node k: (y-monomials of degree <= D) x (monomial
    symmetric functions of weight <= D).  The loop z_{i+1} is literally
    computed via the recursion t^{-1} T_i z_i T_i, so the suite checks its
    inverse form t T_i^{-1} z_{i+1} T_i^{-1} = z_i, which is not circular.
    """
    if kmax < 2:
        raise IndexOutOfRank(f"the relation suite needs nodes up to 2, got {kmax}")
    specs: list[IdentitySpec] = []

    def span(k: int) -> Callable[[], Iterable[VElement]]:
        def dom() -> Iterable[VElement]:
            return (
                VElement.monomial(mono, k, SymFunc.gen("monomial", *lam.parts))
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
                    loop_T(i, loop_T(i, F)) + loop_T(i, F).scale(T - ONE),
                    F.scale(T),
                ),
            )
        for i in range(1, k - 1):
            add(
                f"braid,i={i}",
                "adjacent Hecke loops braid",
                lambda F, i=i: (
                    loop_T(i, loop_T(i + 1, loop_T(i, F))),
                    loop_T(i + 1, loop_T(i, loop_T(i + 1, F))),
                ),
            )
        for i in range(1, k):
            for j in range(i + 2, k):
                add(
                    f"T-comm,i={i},j={j}",
                    "distant Hecke loops commute",
                    lambda F, i=i, j=j: (
                        loop_T(i, loop_T(j, F)),
                        loop_T(j, loop_T(i, F)),
                    ),
                )

        # How the plain raising/lowering arrows meet the Hecke loops.
        if k >= 2:
            add(
                "dminus-square",
                "the doubled lowering arrow absorbs the top Hecke loop",
                lambda F, k=k: (
                    app_dminus(app_dminus(loop_T(k - 1, F))),
                    app_dminus(app_dminus(F)),
                ),
            )
        for i in range(1, k - 1):
            add(
                f"dminus-T-comm,i={i}",
                "lowering slides past low Hecke loops",
                lambda F, i=i: (
                    loop_T(i, app_dminus(F)),
                    app_dminus(loop_T(i, F)),
                ),
            )
        add(
            "dplus-square",
            "the doubled raising arrow absorbs the bottom Hecke loop",
            lambda F: (
                loop_T(1, app_dplus(app_dplus(F))),
                app_dplus(app_dplus(F)),
            ),
        )
        for i in range(1, k):
            add(
                f"dplus-T-shift,i={i}",
                "raising shifts Hecke indices up by one",
                lambda F, i=i: (
                    app_dplus(loop_T(i, F)),
                    loop_T(i + 1, app_dplus(F)),
                ),
            )
        if k >= 2:
            add(
                "lower-commutator-twist",
                "lowering past the raise/lower commutator costs one t",
                lambda F, k=k: (
                    app_dminus(_comm(loop_T(k - 1, F))),
                    _comm(app_dminus(F)).scale(T),
                ),
            )
        if k >= 1:
            add(
                "raise-commutator-twist",
                "raising past the raise/lower commutator costs one t",
                lambda F: (
                    loop_T(1, _comm(app_dplus(F))),
                    app_dplus(_comm(F)).scale(T),
                ),
            )

        # Same block for the twisted raising arrow.
        add(
            "dplus-star-square",
            "the doubled twisted-raising arrow absorbs the bottom Hecke loop",
            lambda F: (
                loop_T(1, app_dplus_star(app_dplus_star(F))),
                app_dplus_star(app_dplus_star(F)),
            ),
        )
        for i in range(1, k):
            add(
                f"dplus-star-T-shift,i={i}",
                "twisted raising shifts Hecke indices up by one",
                lambda F, i=i: (
                    app_dplus_star(loop_T(i, F)),
                    loop_T(i + 1, app_dplus_star(F)),
                ),
            )
        if k >= 2:
            add(
                "lower-starcommutator-twist",
                "lowering past the twisted commutator costs one t",
                lambda F, k=k: (
                    app_dminus(_scomm(F)).scale(T),
                    _scomm(app_dminus(loop_T(k - 1, F))),
                ),
            )
        if k >= 1:
            add(
                "raise-starcommutator-twist",
                "twisted raising past the twisted commutator costs one t",
                lambda F: (
                    _scomm(app_dplus_star(F)).scale(T),
                    loop_T(1, app_dplus_star(_scomm(F))),
                ),
            )

        # Arrows shift the loop families (every index that typechecks).
        for i in range(1, k + 1):
            add(
                f"dplus-z-shift,i={i}",
                "raising shifts the z-loops up by one",
                lambda F, i=i: (
                    app_dplus(loop_z(i, F)),
                    loop_z(i + 1, app_dplus(F)),
                ),
            )
            add(
                f"dplus-star-y-shift,i={i}",
                "twisted raising shifts the y-loops up by one",
                lambda F, i=i: (
                    app_dplus_star(loop_y(i, F)),
                    loop_y(i + 1, app_dplus_star(F)),
                ),
            )
        add(
            "rotation-seam",
            "z_1 after raising matches y_1 after twisted raising",
            lambda F, k=k: (
                loop_z(1, app_dplus(F)),
                loop_y(1, app_dplus_star(F)).scale(-(Q * tpow(k + 1))),
            ),
        )

        # Loop interactions: the y-family.
        for j in range(1, k):
            for i in range(1, k + 1):
                if i in (j, j + 1):
                    continue
                add(
                    f"y-T-comm,i={i},j={j}",
                    "multiplication loops commute with unrelated Hecke loops",
                    lambda F, i=i, j=j: (
                        loop_y(i, loop_T(j, F)),
                        loop_T(j, loop_y(i, F)),
                    ),
                )
        for i in range(1, k):
            add(
                f"y-rel,i={i}",
                "conjugating a multiplication loop by inverse Hecke moves it up",
                lambda F, i=i: (
                    loop_y(i + 1, F),
                    loop_Tinv(i, loop_y(i, loop_Tinv(i, F))).scale(T),
                ),
            )
        for i in range(1, k + 1):
            for j in range(i + 1, k + 1):
                add(
                    f"y-y-comm,i={i},j={j}",
                    "multiplication loops commute",
                    lambda F, i=i, j=j: (
                        loop_y(i, loop_y(j, F)),
                        loop_y(j, loop_y(i, F)),
                    ),
                )
        for i in range(1, k):
            add(
                f"y-dminus-comm,i={i}",
                "low multiplication loops slide past lowering",
                lambda F, i=i: (
                    loop_y(i, app_dminus(F)),
                    app_dminus(loop_y(i, F)),
                ),
            )
        for i in range(1, k + 1):
            def chk_dplus_y(F: VElement, i=i):
                lhs = app_dplus(loop_y(i, F))
                rhs = app_dplus(F)
                for j in range(1, i + 1):
                    rhs = loop_Tinv(j, rhs)
                rhs = loop_y(i, rhs)
                for j in range(i, 0, -1):
                    rhs = loop_T(j, rhs)
                return lhs, rhs

            add(
                f"dplus-y-conjugation,i={i}",
                "raising meets a y-loop up to a Hecke conjugation",
                chk_dplus_y,
            )
        if k >= 1:
            for i in range(1, k + 1):
                add(
                    f"y-loop-vs-word,i={i}",
                    "multiplication equals the commutator word",
                    lambda F, i=i: (loop_y(i, F), y_commutator_word(i, F)),
                )

        # Loop interactions: the z-family.
        for j in range(1, k):
            for i in range(1, k + 1):
                if i in (j, j + 1):
                    continue
                add(
                    f"z-T-comm,i={i},j={j}",
                    "z-loops commute with unrelated Hecke loops",
                    lambda F, i=i, j=j: (
                        loop_z(i, loop_T(j, F)),
                        loop_T(j, loop_z(i, F)),
                    ),
                )
        for i in range(1, k):
            add(
                f"z-rel,i={i}",
                "conjugating a z-loop by inverse Hecke moves it back down",
                lambda F, i=i: (
                    loop_z(i, F),
                    loop_Tinv(i, loop_z(i + 1, loop_Tinv(i, F))).scale(T),
                ),
            )
        for i in range(1, k + 1):
            for j in range(i + 1, k + 1):
                add(
                    f"z-z-comm,i={i},j={j}",
                    "z-loops commute",
                    lambda F, i=i, j=j: (
                        loop_z(i, loop_z(j, F)),
                        loop_z(j, loop_z(i, F)),
                    ),
                )
        for i in range(1, k):
            add(
                f"z-dminus-comm,i={i}",
                "low z-loops slide past lowering",
                lambda F, i=i: (
                    loop_z(i, app_dminus(F)),
                    app_dminus(loop_z(i, F)),
                ),
            )
        for i in range(1, k + 1):
            def chk_dplus_star_z(F: VElement, i=i):
                lhs = app_dplus_star(loop_z(i, F))
                rhs = app_dplus_star(F)
                for j in range(1, i + 1):
                    rhs = loop_T(j, rhs)
                rhs = loop_z(i, rhs)
                for j in range(i, 0, -1):
                    rhs = loop_Tinv(j, rhs)
                return lhs, rhs

            add(
                f"dplus-star-z-conjugation,i={i}",
                "twisted raising meets a z-loop up to an inverse conjugation",
                chk_dplus_star_z,
            )

    return specs


register_suite("atq", identity_specs_atq)


def suite_Atq(kmax: int, D: int, jobs: int = 1) -> Report:
    return run_suite("atq", kmax, D, jobs=jobs)


# -- display ------------------------------------------------------------------


def format_velement(F: VElement) -> str:
    shown = MixedElement(
        {m: convert_basis(G, "powersum") for m, G in F.terms.items()}, F.rank
    )
    return format_mixed(shown, var="y")
