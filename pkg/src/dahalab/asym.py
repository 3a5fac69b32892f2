"""Almost-symmetric elements and the stable-limit operators acting on them.

An element of rank k is a finite sum  sum_lam f_lam(x_1..x_k) * m_lam[tail_k]
where tail_k is the infinite alphabet x_{k+1} + x_{k+2} + ... and m_lam the
monomial symmetric function.  Raising the rank is lossless (each tail orbit
splits into the sub-orbits sorted by the power of the newly exposed
variable); truncation sets every variable beyond a chosen rank to zero and
lands in an ordinary polynomial.

The translation operator is the whole point.  It is computed from an exact
closed form -- after a ladder of inverse Hecke moves, each row
f(x_1..x_{k-1}) * x_k^n * G[x_k + tail_k] maps to

    t^k * f(x_2..x_k) * G[tail_k + q x_1]
        * sum_{0 <= i < n} (q x_1)^{n-i} h_i[(1-t) tail_k]

-- so no truncation limit is ever taken numerically.  On this module the
translations commute exactly; their finite-rank deformations only commute
t-adically, and `limit_verify` plus the `stable` suite check both sides of
that story on spanning sets.
"""

from __future__ import annotations

from itertools import product as cartesian
from math import comb
from typing import Callable, Iterable, Mapping

from .daha_deformed import app_Ytilde, min_t_order
from .daha_finite import app_T, app_Tinv
from .errors import IndexOutOfRank, RankDecrease, RankTooSmall, WindowTooSmall
from .field import ONE, QtScalar, T, coerce, qpow, tpow
from .polyring import Monomial, Poly, monomials_up_to_degree
from .reports import IdentityResult, IdentitySpec, Report, register_suite, run_suite
from .symfunc import (
    EMPTY,
    Partition,
    SymFunc,
    convert_basis,
    expand_to_vars,
    h_one_minus_t,
    partitions_of,
)

__all__ = [
    "AlmostSym",
    "SequenceGen",
    "embed_rank",
    "truncate_rank",
    "apply_limit_T",
    "apply_limit_Tinv",
    "apply_limit_X",
    "apply_limit_Y",
    "y1_closed_form",
    "limit_verify",
    "identity_specs_stable",
    "suite_stable_relations",
    "format_almost_sym",
]

#: A rule producing the rank-m member of a sequence of polynomials.
SequenceGen = Callable[[int], Poly]


class AlmostSym:
    """Finite-variable polynomial parts against monomial tails.

    `terms` maps a tail partition lam to the rank-k polynomial multiplying
    m_lam[tail_k]; zero parts are dropped on construction, so same-rank
    structural equality is dict equality.  Cross-rank equality embeds both
    sides first: an element does not remember at which rank it was written
    down, and neither do the operators below.
    """

    __slots__ = ("rank", "terms")

    def __init__(self, terms: Mapping[Partition, Poly], rank: int):
        clean: dict[Partition, Poly] = {}
        for lam, f in terms.items():
            f = f.promote(rank)
            if f:
                clean[lam] = f
        self.rank = rank
        self.terms = clean

    # -- constructors --------------------------------------------------

    @staticmethod
    def zero(rank: int) -> "AlmostSym":
        return AlmostSym({}, rank)

    @staticmethod
    def one(rank: int) -> "AlmostSym":
        return AlmostSym({EMPTY: Poly.one(rank)}, rank)

    @staticmethod
    def from_poly(f: Poly) -> "AlmostSym":
        return AlmostSym({EMPTY: f}, f.rank)

    @staticmethod
    def from_sym(F: SymFunc, rank: int) -> "AlmostSym":
        """F read over the tail alphabet of `rank` (the full one at rank 0)."""
        M = convert_basis(F, "monomial")
        return AlmostSym(
            {lam: Poly.constant(c, rank) for lam, c in M.coeffs.items()}, rank
        )

    # -- structure -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self) -> int:
        """Total degree, tail weight included."""
        return max(
            (f.degree() + lam.weight() for lam, f in self.terms.items()), default=0
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlmostSym):
            return NotImplemented
        r = max(self.rank, other.rank)
        return embed_rank(self, r).terms == embed_rank(other, r).terms

    # cross-rank equality admits no stable hash
    __hash__ = None  # type: ignore[assignment]

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "AlmostSym") -> "AlmostSym":
        r = max(self.rank, other.rank)
        a, b = embed_rank(self, r), embed_rank(other, r)
        acc = dict(a.terms)
        for lam, f in b.terms.items():
            s = acc.get(lam)
            acc[lam] = f if s is None else s + f
        return AlmostSym(acc, r)

    def __neg__(self) -> "AlmostSym":
        return AlmostSym({lam: -f for lam, f in self.terms.items()}, self.rank)

    def __sub__(self, other: "AlmostSym") -> "AlmostSym":
        return self + (-other)

    def scale(self, c) -> "AlmostSym":
        c = coerce(c)
        if not c:
            return AlmostSym.zero(self.rank)
        return AlmostSym(
            {lam: f.scale(c) for lam, f in self.terms.items()}, self.rank
        )

    def mul_poly(self, g: Poly) -> "AlmostSym":
        """Multiply by a polynomial in the first `g.rank` variables."""
        a = embed_rank(self, max(self.rank, g.rank))
        gg = g.promote(a.rank)
        return AlmostSym({lam: f * gg for lam, f in a.terms.items()}, a.rank)

    def __mul__(self, other: "AlmostSym") -> "AlmostSym":
        r = max(self.rank, other.rank)
        a, b = embed_rank(self, r), embed_rank(other, r)
        acc: dict[Partition, Poly] = {}
        for lam, f in a.terms.items():
            for mu, g in b.terms.items():
                prod = SymFunc.gen("monomial", *lam.parts) * SymFunc.gen(
                    "monomial", *mu.parts
                )
                fg = f * g
                for nu, c in convert_basis(prod, "monomial").coeffs.items():
                    s = acc.get(nu)
                    row = fg.scale(c)
                    acc[nu] = row if s is None else s + row
        return AlmostSym(acc, r)

    def __repr__(self) -> str:
        return format_almost_sym(self)


def _drop_part(lam: Partition, a: int) -> Partition:
    parts = list(lam.parts)
    parts.remove(a)
    return Partition(parts)


def embed_rank(F: AlmostSym, k2: int) -> AlmostSym:
    """Rewrite over a larger rank; the value is unchanged as a series.

    One variable at a time: picking the power of the newly exposed x_{r}
    out of m_lam[tail_{r-1}] gives x_r^a * m_{lam minus a}[tail_r] for each
    distinct part a, plus the orbit avoiding x_r altogether.
    """
    if k2 < F.rank:
        raise RankDecrease(f"embedding cannot shrink rank {F.rank} to {k2}")
    out = F
    while out.rank < k2:
        r = out.rank + 1
        acc: dict[Partition, Poly] = {}

        def bump(lam: Partition, f: Poly):
            s = acc.get(lam)
            acc[lam] = f if s is None else s + f

        for lam, f in out.terms.items():
            g = f.promote(r)
            bump(lam, g)
            for a in {*lam.parts}:
                bump(_drop_part(lam, a), g.mul_var(r, a))
        out = AlmostSym(acc, r)
    return out


def truncate_rank(F: AlmostSym, m: int) -> Poly:
    """Kill every variable beyond x_m, landing in an honest polynomial."""
    if m < F.rank:
        raise RankTooSmall(f"cannot truncate a rank-{F.rank} element to rank {m}")
    k = F.rank
    out = Poly.zero(m)
    for lam, f in F.terms.items():
        tail = expand_to_vars(SymFunc.gen("monomial", *lam.parts), m - k)
        if tail.is_zero():
            continue
        shifted = tail.promote(m)
        if k:
            shifted = shifted.substitute(
                {i: (i + k, ONE) for i in range(1, m - k + 1)}
            )
        out = out + f.promote(m) * shifted
    return out


# -- the limit operators ---------------------------------------------------------


def apply_limit_T(i: int, F: AlmostSym) -> AlmostSym:
    """Hecke generator for s_i; beyond the rank the element is symmetric,
    hence fixed."""
    if i < 1:
        raise IndexOutOfRank(f"T_{i} needs i >= 1")
    if i > F.rank:
        return F
    if i == F.rank:
        F = embed_rank(F, i + 1)
    return AlmostSym({lam: app_T(i, f) for lam, f in F.terms.items()}, F.rank)


def apply_limit_Tinv(i: int, F: AlmostSym) -> AlmostSym:
    if i < 1:
        raise IndexOutOfRank(f"T_{i} needs i >= 1")
    if i > F.rank:
        return F
    if i == F.rank:
        F = embed_rank(F, i + 1)
    return AlmostSym({lam: app_Tinv(i, f) for lam, f in F.terms.items()}, F.rank)


def apply_limit_X(i: int, F: AlmostSym) -> AlmostSym:
    """Multiplication by x_i."""
    if i < 1:
        raise IndexOutOfRank(f"X_{i} needs i >= 1")
    F = embed_rank(F, max(F.rank, i))
    return AlmostSym({lam: f.mul_var(i) for lam, f in F.terms.items()}, F.rank)


def _sub_multisets(nu: Partition) -> list[tuple[Partition, int, int, int]]:
    """Every way to drop a sub-multiset of parts from nu.

    Yields (kept partition, dropped weight, dropped count, multiplicity);
    the multiplicity counts the binomial choices among equal parts.
    """
    out = []
    items = sorted({*nu.parts})
    for drops in cartesian(*(range(nu.mult(a) + 1) for a in items)):
        kept: list[int] = []
        w = n = 0
        ways = 1
        for a, j in zip(items, drops):
            kept += [a] * (nu.mult(a) - j)
            w += a * j
            n += j
            ways *= comb(nu.mult(a), j)
        out.append((Partition(kept), w, n, ways))
    return out


def y1_closed_form(F: AlmostSym) -> AlmostSym:
    """The translation's action after it has eaten the Hecke ladder.

    Computes  Y_1 T_1 ... T_{k-1} F  exactly, at the rank k of F.  Each
    stored tail m_lam[tail_k] is first pushed down to the alphabet
    x_k + tail_k by the power-sum rewrite p_r[tail_k] = p_r[x_k + tail_k]
    - x_k^r, which presents F as rows g(x_1..x_{k-1}) * x_k^N * p_mid[x_k
    + tail_k].  A row maps to

        t^k * g(x_2..x_k) * p_mid[tail_k + q x_1]
            * sum_{0 <= i < N} (q x_1)^{N-i} h_i[(1-t) tail_k]

    (the geometric sum is the h-difference quotient of the complete
    homogeneous functions at the (1-t)-dilated tail; both forms are exact,
    the sum avoids ever dividing by 1 - t).  Rows with N = 0 die, which is
    the translation killing constants and everything fully symmetric.
    """
    if F.rank < 1:
        F = embed_rank(F, 1)
    k = F.rank
    shift = {j: (j + 1, ONE) for j in range(1, k)}
    acc: dict[Partition, Poly] = {}

    def bump(lam: Partition, f: Poly):
        s = acc.get(lam)
        acc[lam] = f if s is None else s + f

    for lam, fpoly in F.terms.items():
        by_n: dict[int, dict[Monomial, QtScalar]] = {}
        for mono, c in fpoly.terms.items():
            by_n.setdefault(mono.exp(k), {})[mono.without(k)] = c
        shifted = {
            n: Poly(g, k).substitute(shift) if shift else Poly(g, k)
            for n, g in by_n.items()
        }
        P = convert_basis(SymFunc.gen("monomial", *lam.parts), "powersum")
        for nu, c0 in P.coeffs.items():
            for mid, w, n_drop, ways in _sub_multisets(nu):
                c1 = c0 * ways * (-1 if n_drop % 2 else 1)
                for n0, g in shifted.items():
                    N = n0 + w
                    if N == 0:
                        continue
                    # p_mid[tail_k + q x_1]: each part either stays on the
                    # tail or becomes (q x_1)^r
                    for mu, w2, _, ways2 in _sub_multisets(mid):
                        c2 = c1 * ways2 * qpow(w2)
                        for i in range(N):
                            row = g.mul_var(1, w2 + N - i).scale(
                                c2 * qpow(N - i) * tpow(k)
                            )
                            tail = SymFunc({mu: ONE}, "powersum") * h_one_minus_t(i)
                            for out_lam, c3 in convert_basis(
                                tail, "monomial"
                            ).coeffs.items():
                                bump(out_lam, row.scale(c3))
    return AlmostSym(acc, k)


def apply_limit_Y(i: int, F: AlmostSym) -> AlmostSym:
    """Translation element; higher indices climb the Hecke tower."""
    if i < 1:
        raise IndexOutOfRank(f"Y_{i} needs i >= 1")
    if i == 1:
        H = embed_rank(F, max(F.rank, 1))
        for j in range(1, H.rank):
            H = apply_limit_Tinv(j, H)
        return y1_closed_form(H)
    return apply_limit_T(i - 1, apply_limit_Y(i - 1, apply_limit_T(i - 1, F))).scale(
        tpow(-1)
    )


# -- t-adic limit verification --------------------------------------------------


def _orders_grow(orders: list[int | None]) -> tuple[bool, str]:
    """Strictly increasing minimum t-orders, None meaning +infinity.

    A zero difference is perfect agreement, so a None satisfies any
    comparison; each finite order must beat the last finite one.
    """
    prev: int | None = None
    for o in orders:
        if o is None:
            continue
        if prev is not None and o <= prev:
            return False, f"orders not strictly increasing: {orders}"
        prev = o
    return True, ""


def limit_verify(
    gen: SequenceGen,
    candidate: AlmostSym,
    window: tuple[int, int],
    slope: Callable[[int], int] | None = None,
) -> Report:
    """Necessary check that gen(m) converges t-adically to the candidate.

    For each rank m in the window the difference gen(m) - truncate(candidate)
    must have every coefficient of t-order at least slope(m), and the minimum
    order must strictly increase across the window.  This is a sound screen,
    not a decision procedure: a sequence could pass on a window and misbehave
    beyond it.  Default slope is m - (rank + degree) of the candidate,
    matching the geometric t-tails the construction produces.
    """
    m0, m1 = window
    if m1 - m0 + 1 < 3:
        raise WindowTooSmall(f"window [{m0}, {m1}] has fewer than three points")
    if m0 < candidate.rank:
        raise RankTooSmall(
            f"window starts below the candidate's rank {candidate.rank}"
        )
    if slope is None:
        c = candidate.rank + candidate.degree()
        slope = lambda m: m - c  # noqa: E731
    floor_failures: list[dict] = []
    orders: list[int | None] = []
    for m in range(m0, m1 + 1):
        d = gen(m) - truncate_rank(candidate, m)
        o = min_t_order(d)
        orders.append(o)
        if o is not None and o < slope(m):
            floor_failures.append(
                {"case": f"m={m}", "lhs": f"order {o}", "rhs": f"slope {slope(m)}"}
            )
    npts = m1 - m0 + 1
    grew, why = _orders_grow(orders)
    growth_failures = [] if grew else [{"case": "window", "lhs": why, "rhs": ""}]
    identities = [
        IdentityResult("order-floor", "every difference is t-small", npts,
                       floor_failures),
        IdentityResult("order-growth", "differences shrink strictly", npts,
                       growth_failures),
    ]
    return Report("limit-check", candidate.rank, candidate.degree(), identities)


# -- the stable suite ------------------------------------------------------------


def _spanning(k: int, D: int) -> Iterable[AlmostSym]:
    for mono in monomials_up_to_degree(k, D):
        for w in range(D + 1):
            for lam in partitions_of(w):
                yield AlmostSym({lam: Poly.monomial(mono, k)}, k)


# Measured: every nonzero truncation difference below has minimum t-order
# exactly the truncation rank, so the floor demands order > m - slack and
# the finite orders must climb.
GROWTH_SLACK = 1


def _vs_deformed_growth(F: AlmostSym, k: int) -> tuple[str, str]:
    """Truncations of the exact translation against the deformed finite-rank
    one: the difference must shrink t-adically as the rank grows."""
    G = apply_limit_Y(1, F)
    m0 = max(G.rank, k, 2)
    orders: list[int | None] = []
    for m in range(m0, m0 + 3):
        d = truncate_rank(G, m) - app_Ytilde(1, truncate_rank(F, m))
        o = min_t_order(d)
        if o is not None and o <= m - GROWTH_SLACK:
            return ("t-order decay", f"order {o} at rank {m} too small")
        orders.append(o)
    grew, why = _orders_grow(orders)
    return ("t-order decay", why) if not grew else ("t-order decay", "t-order decay")


def identity_specs_stable(k: int, D: int) -> list[IdentitySpec]:
    if k < 2:
        raise IndexOutOfRank("the stable suite needs rank >= 2")

    def dom():
        return _spanning(k, D)

    specs: list[IdentitySpec] = []

    def add(name, anchor, check):
        specs.append(IdentitySpec(name, anchor, dom, check))

    Tt, Xx, Yy = apply_limit_T, apply_limit_X, apply_limit_Y

    for i in range(1, k + 2):
        add(
            f"quadratic[{i}]",
            "Hecke generators satisfy (T - 1)(T + t) = 0",
            lambda F, i=i: (
                Tt(i, Tt(i, F)) + Tt(i, F).scale(T - ONE) - F.scale(T),
                AlmostSym.zero(k),
            ),
        )
    for i in range(1, k + 1):
        add(
            f"braid[{i},{i + 1}]",
            "adjacent Hecke generators braid",
            lambda F, i=i: (
                Tt(i, Tt(i + 1, Tt(i, F))),
                Tt(i + 1, Tt(i, Tt(i + 1, F))),
            ),
        )
    for i in range(1, k + 2):
        for j in range(i + 2, k + 2):
            add(
                f"T-comm[{i},{j}]",
                "distant Hecke generators commute",
                lambda F, i=i, j=j: (Tt(i, Tt(j, F)), Tt(j, Tt(i, F))),
            )
    for i in range(1, k + 1):
        add(
            f"X-rel[{i}]",
            "multiplication climbs the tower through inverse Hecke moves",
            lambda F, i=i: (
                apply_limit_Tinv(i, Xx(i, apply_limit_Tinv(i, F))).scale(T),
                Xx(i + 1, F),
            ),
        )
    for i in range(1, k + 2):
        for j in range(1, k + 2):
            if j in (i, i + 1):
                continue
            add(
                f"TX-comm[{i},{j}]",
                "Hecke generator ignores distant multiplications",
                lambda F, i=i, j=j: (Tt(i, Xx(j, F)), Xx(j, Tt(i, F))),
            )
    for i in range(1, k + 2):
        for j in range(i + 1, k + 2):
            add(
                f"XX-comm[{i},{j}]",
                "multiplications commute",
                lambda F, i=i, j=j: (Xx(i, Xx(j, F)), Xx(j, Xx(i, F))),
            )
    for i in range(1, k + 1):
        add(
            f"Y-rel[{i}]",
            "translation tower descends through inverse Hecke conjugation",
            lambda F, i=i: (
                apply_limit_Tinv(i, Yy(i + 1, apply_limit_Tinv(i, F))).scale(T),
                Yy(i, F),
            ),
        )
    for i in range(1, k + 2):
        for j in range(1, k + 2):
            if j in (i, i + 1):
                continue
            add(
                f"TY-comm[{i},{j}]",
                "Hecke generator ignores distant translations",
                lambda F, i=i, j=j: (Tt(i, Yy(j, F)), Yy(j, Tt(i, F))),
            )
    for i in range(1, k + 2):
        for j in range(i + 1, k + 2):
            add(
                f"YY-comm[{i},{j}]",
                "translations commute exactly in the limit",
                lambda F, i=i, j=j: (Yy(i, Yy(j, F)), Yy(j, Yy(i, F))),
            )
    add(
        "XY-cross",
        "the single cross relation braiding multiplication past translation",
        lambda F: (
            Yy(1, Tt(1, Xx(1, F))),
            Xx(2, Yy(1, Tt(1, F))),
        ),
    )
    specs.append(
        IdentitySpec(
            "stable-vs-deformed-growth",
            "exact translation is the t-adic limit of the deformed ones",
            dom,
            lambda F: _vs_deformed_growth(F, k),
        )
    )
    return specs


register_suite("stable", identity_specs_stable)


def suite_stable_relations(k: int, D: int, jobs: int = 1) -> Report:
    return run_suite("stable", k, D, jobs=jobs)


# -- printing ---------------------------------------------------------------------


def format_almost_sym(F: AlmostSym) -> str:
    if not F.terms:
        return "0"
    chunks: list[str] = []
    for lam in sorted(F.terms, key=lambda p: (-p.weight(), tuple(-a for a in p.parts))):
        fs = repr(F.terms[lam])
        name = f"m[{','.join(map(str, lam.parts))}]" if lam.parts else ""
        multi = (" + " in fs) or (" - " in fs)
        if not name:
            body = fs
        elif fs == "1":
            body = name
        elif fs == "-1":
            body = f"-{name}"
        elif multi:
            body = f"({fs}) * {name}"
        else:
            body = f"{fs} * {name}"
        if not chunks:
            chunks.append(body)
        elif body.startswith("-"):
            chunks.append(f" - {body[1:]}")
        else:
            chunks.append(f" + {body}")
    return "".join(chunks)
