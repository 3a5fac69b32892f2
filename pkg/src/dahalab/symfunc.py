"""Partitions, symmetric functions, plethysm, and creation operators.

Symmetric functions are stored as finite coefficient maps over one of four
bases (monomial, powersum, homogeneous, elementary).  The monomial basis is
the storage basis — it is the one stable under truncation to finitely many
variables — while every computation that needs multiplicativity (products,
plethysm, the creation operators) routes through power sums.

Plethystic substitution works on affine alphabet expressions c·X + sum of
scaled monomials; substituting into p_n raises q,t to n-th powers inside
the alphabet's coefficients and n-th powers the monomials.  Exp[..] is never
materialized: the two places that pair against it (`vertex_B`,
`exp_pair_ct`) only ever need finitely many of its coefficients.

Transition matrices between bases are computed per degree, exactly over
Fraction, and cached behind a lock so concurrent readers are safe.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, Iterator, Mapping

from sympy.utilities.iterables import multiset_permutations

from .errors import SignatureViolation
from .field import ONE, QtScalar, T, ZERO, coerce
from .polyring import MONE, Monomial, Poly

BASES = ("monomial", "powersum", "homogeneous", "elementary")
_SHORT = {"monomial": "m", "powersum": "p", "homogeneous": "h", "elementary": "e"}
_LONG = {v: k for k, v in _SHORT.items()}


class Partition:
    """Weakly decreasing tuple of positive parts (canonicalized on input)."""

    __slots__ = ("parts", "_hash")

    def __init__(self, parts: Iterable[int] = ()):
        ps = tuple(sorted((p for p in parts if p != 0), reverse=True))
        if ps and ps[-1] < 0:
            raise ValueError(f"negative part in {ps}")
        self.parts = ps
        self._hash = hash(ps)

    def weight(self) -> int:
        return sum(self.parts)

    def length(self) -> int:
        return len(self.parts)

    def mult(self, a: int) -> int:
        return self.parts.count(a)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __eq__(self, other) -> bool:
        return isinstance(other, Partition) and self.parts == other.parts

    def __hash__(self):
        return self._hash

    def __repr__(self) -> str:
        return f"[{','.join(map(str, self.parts))}]"


EMPTY = Partition()


@lru_cache(maxsize=None)
def _partitions_bounded(n: int, maxp: int) -> tuple[tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, maxp), 0, -1):
        for rest in _partitions_bounded(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def partitions_of(n: int) -> list[Partition]:
    return [Partition(p) for p in _partitions_bounded(n, n)]


def zee(lam: Partition) -> int:
    """The centralizer order z_lambda = prod a^{m_a} m_a!."""
    z = 1
    for a in set(lam.parts):
        m = lam.mult(a)
        z *= a**m * factorial(m)
    return z


# -- transition matrices ------------------------------------------------------

_trans_lock = threading.RLock()  # reentrant: building one table may build another
_trans_cache: dict[tuple[str, int], dict[Partition, dict[Partition, Fraction]]] = {}


def _p_times_m(r: int, lam: Partition) -> dict[Partition, int]:
    """Multiply m_lam by p_r in the monomial basis (exact integer rule)."""
    out: dict[Partition, int] = {}
    for a in set(lam.parts) | {0}:
        parts = list(lam.parts)
        if a:
            parts.remove(a)
        parts.append(a + r)
        mu = Partition(parts)
        out[mu] = out.get(mu, 0) + mu.mult(a + r)
    return out


def _rows_p_to_m(n: int) -> dict[Partition, dict[Partition, Fraction]]:
    rows = {}
    for lam in partitions_of(n):
        acc: dict[Partition, Fraction] = {EMPTY: Fraction(1)}
        for r in lam.parts:
            nxt: dict[Partition, Fraction] = {}
            for mu, c in acc.items():
                for nu, k in _p_times_m(r, mu).items():
                    nxt[nu] = nxt.get(nu, Fraction(0)) + c * k
            acc = nxt
        rows[lam] = acc
    return rows


def _one_part_to_p(n: int, sign: bool) -> dict[Partition, Fraction]:
    """h_n (sign=False) or e_n (sign=True) expanded in power sums."""
    out = {}
    for lam in partitions_of(n):
        c = Fraction(1, zee(lam))
        if sign and (n - lam.length()) % 2:
            c = -c
        out[lam] = c
    return out


def _rows_multiplicative_to_p(n: int, sign: bool) -> dict[Partition, dict[Partition, Fraction]]:
    rows = {}
    for lam in partitions_of(n):
        acc: dict[Partition, Fraction] = {EMPTY: Fraction(1)}
        for r in lam.parts:
            one = _one_part_to_p(r, sign)
            nxt: dict[Partition, Fraction] = {}
            for mu, c in acc.items():
                for nu, d in one.items():
                    key = Partition(mu.parts + nu.parts)
                    nxt[key] = nxt.get(key, Fraction(0)) + c * d
            acc = nxt
        rows[lam] = acc
    return rows


def _invert_rows(
    n: int, rows: dict[Partition, dict[Partition, Fraction]]
) -> dict[Partition, dict[Partition, Fraction]]:
    order = partitions_of(n)
    size = len(order)
    a = [[rows[p].get(q, Fraction(0)) for q in order] for p in order]
    inv = [[Fraction(int(i == j)) for j in range(size)] for i in range(size)]
    for col in range(size):
        piv = next(r for r in range(col, size) if a[r][col])
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        d = a[col][col]
        a[col] = [v / d for v in a[col]]
        inv[col] = [v / d for v in inv[col]]
        for r in range(size):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
                inv[r] = [v - f * w for v, w in zip(inv[r], inv[col])]
    return {
        order[i]: {order[j]: inv[i][j] for j in range(size) if inv[i][j]}
        for i in range(size)
    }


def _transition(kind: str, n: int) -> dict[Partition, dict[Partition, Fraction]]:
    """Expansion rows for one degree: kind 'pm' maps p_lam -> m basis, etc."""
    key = (kind, n)
    got = _trans_cache.get(key)
    if got is not None:
        return got
    with _trans_lock:
        got = _trans_cache.get(key)
        if got is not None:
            return got
        if kind == "pm":
            rows = _rows_p_to_m(n)
        elif kind == "mp":
            rows = _invert_rows(n, _transition("pm", n))
        elif kind == "hp":
            rows = _rows_multiplicative_to_p(n, sign=False)
        elif kind == "ep":
            rows = _rows_multiplicative_to_p(n, sign=True)
        elif kind == "ph":
            rows = _invert_rows(n, _transition("hp", n))
        elif kind == "pe":
            rows = _invert_rows(n, _transition("ep", n))
        else:
            raise ValueError(kind)
        _trans_cache[key] = rows
        return rows


# -- symmetric functions -------------------------------------------------------


class SymFunc:
    """Finite linear combination of basis elements with QtScalar coefficients."""

    __slots__ = ("coeffs", "basis")

    def __init__(self, coeffs: Mapping[Partition, QtScalar], basis: str):
        if basis not in BASES:
            basis = _LONG[basis]  # accept single-letter names
        self.coeffs = {p: c for p, c in coeffs.items() if c}
        self.basis = basis

    # constructors

    @staticmethod
    def zero(basis: str = "monomial") -> "SymFunc":
        return SymFunc({}, basis)

    @staticmethod
    def one(basis: str = "monomial") -> "SymFunc":
        return SymFunc({EMPTY: ONE}, basis)

    @staticmethod
    def constant(c, basis: str = "monomial") -> "SymFunc":
        return SymFunc({EMPTY: coerce(c)}, basis)

    @staticmethod
    def gen(basis: str, *parts: int) -> "SymFunc":
        return SymFunc({Partition(parts): ONE}, basis)

    # structure

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def degree(self) -> int:
        return max((p.weight() for p in self.coeffs), default=0)

    def homogeneous_parts(self) -> dict[int, dict[Partition, QtScalar]]:
        out: dict[int, dict[Partition, QtScalar]] = {}
        for p, c in self.coeffs.items():
            out.setdefault(p.weight(), {})[p] = c
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = SymFunc.constant(other)
        if not isinstance(other, SymFunc):
            return NotImplemented
        if self.basis == other.basis:
            return self.coeffs == other.coeffs
        return convert_basis(self, "monomial").coeffs == convert_basis(other, "monomial").coeffs

    def __hash__(self):
        return hash(frozenset(convert_basis(self, "monomial").coeffs.items()))

    # arithmetic

    def __add__(self, other: "SymFunc") -> "SymFunc":
        if self.basis != other.basis:
            other = convert_basis(other, self.basis)
        acc = dict(self.coeffs)
        for p, c in other.coeffs.items():
            s = acc.get(p)
            acc[p] = c if s is None else s + c
        return SymFunc(acc, self.basis)

    def __neg__(self) -> "SymFunc":
        return SymFunc({p: -c for p, c in self.coeffs.items()}, self.basis)

    def __sub__(self, other: "SymFunc") -> "SymFunc":
        return self + (-other)

    def scale(self, c) -> "SymFunc":
        c = coerce(c)
        if not c:
            return SymFunc.zero(self.basis)
        return SymFunc({p: c * v for p, v in self.coeffs.items()}, self.basis)

    def __mul__(self, other: "SymFunc") -> "SymFunc":
        a = convert_basis(self, "powersum")
        b = convert_basis(other, "powersum")
        acc: dict[Partition, QtScalar] = {}
        for p1, c1 in a.coeffs.items():
            for p2, c2 in b.coeffs.items():
                key = Partition(p1.parts + p2.parts)
                c = c1 * c2
                s = acc.get(key)
                acc[key] = c if s is None else s + c
        return convert_basis(SymFunc(acc, "powersum"), self.basis)

    def map_coeffs(self, fn) -> "SymFunc":
        return SymFunc({p: fn(c) for p, c in self.coeffs.items()}, self.basis)

    def __repr__(self) -> str:
        return format_symfunc(self)


def convert_basis(F: SymFunc, target: str) -> SymFunc:
    if target not in BASES:
        target = _LONG[target]
    if F.basis == target:
        return F
    src, dst = _SHORT[F.basis], _SHORT[target]
    out: dict[Partition, QtScalar] = {}

    def apply(kind: str, chunk: dict[Partition, QtScalar], n: int) -> dict[Partition, QtScalar]:
        rows = _transition(kind, n)
        acc: dict[Partition, QtScalar] = {}
        for lam, c in chunk.items():
            for mu, f in rows[lam].items():
                add = c * f
                s = acc.get(mu)
                acc[mu] = add if s is None else s + add
        return acc

    for n, chunk in F.homogeneous_parts().items():
        if src != "p":
            chunk = apply(src + "p", chunk, n)
        if dst != "p":
            chunk = apply("p" + dst, chunk, n)
        for p, c in chunk.items():
            s = out.get(p)
            out[p] = c if s is None else s + c
    return SymFunc(out, target)


# -- alphabet expressions and plethysm ----------------------------------------


class AlphabetExpr:
    """Affine alphabet: x_coeff * X + sum of (scalar, monomial) addends.

    X stands for whichever infinite alphabet the caller works over (the
    full alphabet or a tail alphabet); the expression itself does not care.
    """

    __slots__ = ("x_coeff", "terms")

    def __init__(self, x_coeff=ZERO, terms: Iterable[tuple[QtScalar, Monomial]] = ()):
        self.x_coeff = coerce(x_coeff)
        acc: dict[Monomial, QtScalar] = {}
        for c, m in terms:
            c = coerce(c)
            s = acc.get(m)
            acc[m] = c if s is None else s + c
        self.terms = tuple((c, m) for m, c in acc.items() if c)

    @staticmethod
    def alphabet() -> "AlphabetExpr":
        return AlphabetExpr(ONE)

    def __add__(self, other: "AlphabetExpr") -> "AlphabetExpr":
        return AlphabetExpr(
            self.x_coeff + other.x_coeff,
            self.terms + other.terms,
        )

    def __neg__(self) -> "AlphabetExpr":
        return AlphabetExpr(-self.x_coeff, tuple((-c, m) for c, m in self.terms))

    def __sub__(self, other: "AlphabetExpr") -> "AlphabetExpr":
        return self + (-other)

    def scale(self, c) -> "AlphabetExpr":
        c = coerce(c)
        return AlphabetExpr(c * self.x_coeff, tuple((c * a, m) for a, m in self.terms))


class MixedElement:
    """Polynomial in x-variables whose coefficients are symmetric functions."""

    __slots__ = ("terms", "rank")

    def __init__(self, terms: Mapping[Monomial, SymFunc], rank: int):
        self.terms = {m: F for m, F in terms.items() if F}
        self.rank = rank

    @staticmethod
    def zero(rank: int) -> "MixedElement":
        return MixedElement({}, rank)

    @staticmethod
    def from_sym(F: SymFunc, rank: int) -> "MixedElement":
        return MixedElement({MONE: F}, rank)

    @staticmethod
    def from_poly(f: Poly) -> "MixedElement":
        return MixedElement(
            {m: SymFunc.constant(c) for m, c in f.terms.items()}, f.rank
        )

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MixedElement):
            return NotImplemented
        if self.terms.keys() != other.terms.keys():
            return False
        return all(self.terms[m] == other.terms[m] for m in self.terms)

    def __add__(self, other: "MixedElement") -> "MixedElement":
        acc = dict(self.terms)
        for m, F in other.terms.items():
            s = acc.get(m)
            acc[m] = F if s is None else s + F
        return MixedElement(acc, max(self.rank, other.rank))

    def __neg__(self) -> "MixedElement":
        return MixedElement({m: -F for m, F in self.terms.items()}, self.rank)

    def __sub__(self, other: "MixedElement") -> "MixedElement":
        return self + (-other)

    def __mul__(self, other: "MixedElement") -> "MixedElement":
        acc: dict[Monomial, SymFunc] = {}
        for m1, F1 in self.terms.items():
            for m2, F2 in other.terms.items():
                m = m1.mul(m2)
                F = F1 * F2
                s = acc.get(m)
                acc[m] = F if s is None else s + F
        return MixedElement(acc, max(self.rank, other.rank))

    def scale(self, c) -> "MixedElement":
        return MixedElement({m: F.scale(c) for m, F in self.terms.items()}, self.rank)

    def sym_part(self) -> SymFunc:
        """Coefficient of the empty monomial."""
        return self.terms.get(MONE, SymFunc.zero())

    def poly_part(self) -> Poly:
        """Interpret as a plain polynomial; all coefficients must be constants."""
        out: dict[Monomial, QtScalar] = {}
        for m, F in self.terms.items():
            M = convert_basis(F, "monomial")
            for p, c in M.coeffs.items():
                if p.parts:
                    raise SignatureViolation(
                        f"nonconstant symmetric part {M!r} in poly_part"
                    )
                out[m] = c
        return Poly(out, self.rank)

    def __repr__(self) -> str:
        return format_mixed(self)


def _p_of_alphabet(n: int, A: AlphabetExpr, rank: int) -> MixedElement:
    terms: dict[Monomial, SymFunc] = {}
    if A.x_coeff:
        terms[MONE] = SymFunc({Partition((n,)): A.x_coeff.raise_params(n)}, "powersum")
    for c, m in A.terms:
        key = m.pow(n)
        add = SymFunc.constant(c.raise_params(n), "powersum")
        s = terms.get(key)
        terms[key] = add if s is None else s + add
    return MixedElement(terms, rank)


def plethysm_substitute(F: SymFunc, A: AlphabetExpr, ambient_rank: int) -> MixedElement:
    """Evaluate F at the alphabet A: p_n picks up A with q,t raised to n."""
    P = convert_basis(F, "powersum")
    out = MixedElement.zero(ambient_rank)
    for lam, c in P.coeffs.items():
        term = MixedElement.from_sym(SymFunc.constant(c, "powersum"), ambient_rank)
        for r in lam.parts:
            term = term * _p_of_alphabet(r, A, ambient_rank)
        out = out + term
    return out


def h_of_expr(n: int, A: AlphabetExpr, ambient_rank: int = 0) -> MixedElement:
    """h_n[A] by the Newton recurrence n*h_n = sum_{i=1..n} p_i[A] * h_{n-i}."""
    if n < 0:
        raise ValueError("h_n needs n >= 0")
    hs = [MixedElement.from_sym(SymFunc.one("powersum"), ambient_rank)]
    ps = [None] + [_p_of_alphabet(i, A, ambient_rank) for i in range(1, n + 1)]
    for m in range(1, n + 1):
        acc = MixedElement.zero(ambient_rank)
        for i in range(1, m + 1):
            acc = acc + ps[i] * hs[m - i]
        hs.append(acc.scale(Fraction(1, m)))
    return hs[n]


def expand_to_vars(F: SymFunc, m: int) -> Poly:
    """The polynomial F(x_1,...,x_m, 0, 0, ...)."""
    M = convert_basis(F, "monomial")
    out: dict[Monomial, QtScalar] = {}
    for lam, c in M.coeffs.items():
        if lam.length() > m:
            continue
        padded = list(lam.parts) + [0] * (m - lam.length())
        for perm in multiset_permutations(padded):
            mono = Monomial((i + 1, e) for i, e in enumerate(perm) if e)
            out[mono] = c
    return Poly(out, m)


# -- Exp pairings --------------------------------------------------------------


@lru_cache(maxsize=None)
def h_one_minus_t(n: int) -> SymFunc:
    """h_n[(1-t)X] as a symmetric function (the Exp[-(t-1)zX] coefficients)."""
    return h_of_expr(n, AlphabetExpr(ONE - T)).sym_part()


def vertex_B(n: int, F: SymFunc) -> SymFunc:
    """Coefficient of z^n in F[X - z^{-1}] * Exp[-(t-1)zX].

    Writing F in power sums, p_k[X - z^{-1}] = p_k[X] - z^{-k}, so the
    z-negative part is a signed sum over sub-multisets of each partition;
    each z^{-j} pairs with the z^{n+j} Exp coefficient h_{n+j}[(1-t)X].
    """
    if n < 0:
        raise ValueError("vertex operators are indexed by n >= 0")
    P = convert_basis(F, "powersum")
    by_drop: dict[int, dict[Partition, QtScalar]] = {}
    for lam, c in P.coeffs.items():
        distinct = sorted(set(lam.parts))
        choices = [(a, lam.mult(a)) for a in distinct]

        def rec(idx: int, removed: int, sign: int, ways: int, kept: list[int]):
            if idx == len(choices):
                key = Partition(kept)
                acc = by_drop.setdefault(removed, {})
                add = c * Fraction(sign * ways)
                s = acc.get(key)
                acc[key] = add if s is None else s + add
                return
            a, ma = choices[idx]
            for take in range(ma + 1):
                rec(
                    idx + 1,
                    removed + take * a,
                    sign * (-1) ** take,
                    ways * comb(ma, take),
                    kept + [a] * (ma - take),
                )

        rec(0, 0, 1, 1, [])
    out = SymFunc.zero("powersum")
    for j, chunk in by_drop.items():
        out = out + SymFunc(chunk, "powersum") * convert_basis(
            h_one_minus_t(n + j), "powersum"
        )
    return convert_basis(out, "monomial")


def exp_pair_ct(P: Mapping[int, SymFunc]) -> SymFunc:
    """Constant term of (sum_n v^n P[n]) * Exp[-v^{-1}X] in v.

    Uses h_m[-v^{-1}X] = (-1)^m e_m[X] v^{-m}: each v^n coefficient pairs
    with exactly one Exp term.
    """
    out = SymFunc.zero("monomial")
    for n, F in P.items():
        if n < 0:
            raise ValueError("exp_pair_ct needs nonnegative v-powers")
        if not F:
            continue
        sign = ONE if n % 2 == 0 else -ONE
        out = out + (SymFunc.gen("elementary", n) * F).scale(sign)
    return out


# -- printing -------------------------------------------------------------------


def _sym_sort_key(p: Partition):
    return (-p.weight(), tuple(-a for a in p.parts))


def format_symfunc(F: SymFunc) -> str:
    from .field import format_scalar

    if not F.coeffs:
        return "0"
    letter = _SHORT[F.basis]
    chunks: list[str] = []
    for p in sorted(F.coeffs, key=_sym_sort_key):
        c = F.coeffs[p]
        name = f"{letter}[{','.join(map(str, p.parts))}]" if p.parts else ""
        cs = format_scalar(c)
        if not name:
            body = cs
        elif cs == "1":
            body = name
        elif cs == "-1":
            body = f"-{name}"
        else:
            body = f"{cs}*{name}"
        if not chunks:
            chunks.append(body)
        elif body.startswith("-"):
            chunks.append(f" - {body[1:]}")
        else:
            chunks.append(f" + {body}")
    return "".join(chunks)


def format_mixed(el: MixedElement, var: str = "x") -> str:
    from .polyring import _grade_key, format_monomial

    if not el.terms:
        return "0"
    if len(el.terms) == 1 and MONE in el.terms:
        return format_symfunc(el.terms[MONE])
    chunks: list[str] = []
    for m in sorted(el.terms, key=_grade_key):
        F = el.terms[m]
        fs = format_symfunc(F)
        mono = format_monomial(m, var)
        multi = ("+" in fs) or (" - " in fs)
        if not mono:
            body = f"({fs})" if multi else fs
        elif fs == "1":
            body = mono
        elif fs == "-1":
            body = f"-{mono}"
        elif multi:
            body = f"{mono} * ({fs})"
        elif fs.startswith("-"):
            body = f"-{mono} * {fs[1:]}"
        else:
            body = f"{mono} * {fs}"
        if not chunks:
            chunks.append(body)
        elif body.startswith("-"):
            chunks.append(f" - {body[1:]}")
        else:
            chunks.append(f" + {body}")
    return "".join(chunks)
