"""Sparse Laurent polynomials in x_1..x_k over Q(q,t).

Exponent vectors are stored sparsely (index -> nonzero exponent); the same
representation serves the polynomial ("plus") and Laurent worlds, with the
signature derived from the stored exponents and checked where an operation
only makes sense on one side.

The module owns the symmetric-group action and the Demazure-Lusztig
operators

    T_i f = s_i f + (1-t) x_i (f - s_i f)/(x_i - x_{i+1}),

whose divided difference is computed by explicit synthetic division with a
hard error if a remainder survives: the division is exact for every input
in the operators' domain, so a remainder can only mean an implementation
bug and must never be absorbed silently.
"""

from __future__ import annotations

from typing import Callable, Iterable, Iterator, Mapping

from .errors import (
    IndexOutOfRank,
    InexactDivision,
    NegativeExponentAtZero,
    SignatureViolation,
)
from .field import ONE, QtScalar, T, ZERO, coerce, format_scalar, tpow

_ONE_MINUS_T = ONE - T
_T_MINUS_ONE = T - ONE
_T_INV = tpow(-1)


class Monomial:
    """Immutable sparse exponent vector; indices start at 1."""

    __slots__ = ("exps", "_hash")

    def __init__(self, exps: Iterable[tuple[int, int]] = ()):
        pairs = tuple(sorted((i, e) for i, e in exps if e != 0))
        self.exps = pairs
        self._hash = hash(pairs)

    @staticmethod
    def var(i: int, e: int = 1) -> "Monomial":
        return Monomial(((i, e),))

    def exp(self, i: int) -> int:
        for j, e in self.exps:
            if j == i:
                return e
        return 0

    def degree(self) -> int:
        return sum(e for _, e in self.exps)

    def max_index(self) -> int:
        return self.exps[-1][0] if self.exps else 0

    def min_index(self) -> int:
        return self.exps[0][0] if self.exps else 0

    def is_plus(self) -> bool:
        return all(e > 0 for _, e in self.exps)

    def is_one(self) -> bool:
        return not self.exps

    def mul(self, other: "Monomial") -> "Monomial":
        acc = dict(self.exps)
        for i, e in other.exps:
            acc[i] = acc.get(i, 0) + e
        return Monomial(acc.items())

    def mul_var(self, i: int, e: int) -> "Monomial":
        acc = dict(self.exps)
        acc[i] = acc.get(i, 0) + e
        return Monomial(acc.items())

    def without(self, i: int) -> "Monomial":
        return Monomial((j, e) for j, e in self.exps if j != i)

    def pow(self, n: int) -> "Monomial":
        return Monomial((i, e * n) for i, e in self.exps)

    def swap(self, i: int, j: int) -> "Monomial":
        acc = dict(self.exps)
        ei, ej = acc.pop(i, 0), acc.pop(j, 0)
        if ej:
            acc[i] = ej
        if ei:
            acc[j] = ei
        return Monomial(acc.items())

    def relabel(self, where: Mapping[int, int]) -> "Monomial":
        """Rename variable indices; `where` must be injective on the support."""
        return Monomial((where.get(i, i), e) for i, e in self.exps)

    def __eq__(self, other) -> bool:
        return isinstance(other, Monomial) and self.exps == other.exps

    def __hash__(self):
        return self._hash

    def __repr__(self) -> str:
        return format_monomial(self) or "1"


MONE = Monomial()


def format_monomial(m: Monomial, var: str = "x") -> str:
    return "*".join(
        f"{var}{i}" if e == 1 else f"{var}{i}^{e}" for i, e in m.exps
    )


def _grade_key(m: Monomial):
    # descending total degree, then lex with x1 first (larger exponent wins)
    dense = tuple((i, -e) for i, e in m.exps)
    return (-m.degree(), dense)


class Poly:
    """Sparse polynomial: map Monomial -> QtScalar plus a rank tag.

    The rank records how many variables the ambient ring has; operators
    use it to validate indices.  Instances are treated as immutable.
    """

    __slots__ = ("terms", "rank")

    def __init__(self, terms: Mapping[Monomial, QtScalar], rank: int):
        clean = {m: c for m, c in terms.items() if c}
        for m in clean:
            if m.max_index() > rank:
                raise IndexOutOfRank(
                    f"monomial {m!r} does not fit in rank {rank}"
                )
        self.terms = clean
        self.rank = rank

    # -- constructors --------------------------------------------------

    @staticmethod
    def zero(rank: int) -> "Poly":
        return Poly({}, rank)

    @staticmethod
    def one(rank: int) -> "Poly":
        return Poly({MONE: ONE}, rank)

    @staticmethod
    def constant(c, rank: int) -> "Poly":
        return Poly({MONE: coerce(c)}, rank)

    @staticmethod
    def var(i: int, rank: int, e: int = 1) -> "Poly":
        if not 1 <= i <= rank:
            raise IndexOutOfRank(f"x{i} not in rank {rank}")
        return Poly({Monomial.var(i, e): ONE}, rank)

    @staticmethod
    def monomial(m: Monomial, rank: int, c=ONE) -> "Poly":
        return Poly({m: coerce(c)}, rank)

    # -- structure -------------------------------------------------------

    @property
    def signature(self) -> str:
        return "plus" if all(m.is_plus() for m in self.terms) else "laurent"

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Poly)
            and self.rank == other.rank
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.rank, frozenset(self.terms.items())))

    def promote(self, rank: int) -> "Poly":
        if rank < self.rank:
            raise IndexOutOfRank(f"cannot demote rank {self.rank} to {rank}")
        if rank == self.rank:
            return self
        return Poly(self.terms, rank)

    def coeff(self, m: Monomial) -> QtScalar:
        return self.terms.get(m, ZERO)

    def iterterms(self) -> Iterator[tuple[Monomial, QtScalar]]:
        return iter(self.terms.items())

    def degree(self) -> int:
        return max((m.degree() for m in self.terms), default=0)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        rank = max(self.rank, other.rank)
        acc = dict(self.terms)
        for m, c in other.terms.items():
            s = acc.get(m)
            acc[m] = c if s is None else s + c
        return Poly(acc, rank)

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.terms.items()}, self.rank)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        rank = max(self.rank, other.rank)
        acc: dict[Monomial, QtScalar] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1.mul(m2)
                c = c1 * c2
                s = acc.get(m)
                acc[m] = c if s is None else s + c
        return Poly(acc, rank)

    def scale(self, c) -> "Poly":
        c = coerce(c)
        if not c:
            return Poly.zero(self.rank)
        return Poly({m: c * v for m, v in self.terms.items()}, self.rank)

    def mul_mono(self, m: Monomial, c=ONE) -> "Poly":
        c = coerce(c)
        return Poly({mm.mul(m): c * v for mm, v in self.terms.items()}, self.rank)

    def mul_var(self, i: int, e: int = 1) -> "Poly":
        if not 1 <= i <= self.rank:
            raise IndexOutOfRank(f"x{i} not in rank {self.rank}")
        return Poly({m.mul_var(i, e): c for m, c in self.terms.items()}, self.rank)

    # -- variable maps -------------------------------------------------------

    def swap_vars(self, i: int, j: int) -> "Poly":
        return Poly({m.swap(i, j): c for m, c in self.terms.items()}, self.rank)

    def substitute(self, images: Mapping[int, tuple[int, QtScalar]]) -> "Poly":
        """Map x_i -> c_i * x_{j_i} for each (i -> (j_i, c_i)); must be injective.

        Exponents ride along (negative ones scale by c^e exactly), which is
        all the rotation-type generators need.
        """
        acc: dict[Monomial, QtScalar] = {}
        for m, c in self.terms.items():
            scale = c
            for i, e in m.exps:
                if i in images:
                    scale = scale * (images[i][1] ** e)
            mm = m.relabel({i: j for i, (j, _) in images.items()})
            s = acc.get(mm)
            acc[mm] = scale if s is None else s + scale
        return Poly(acc, self.rank)

    def map_coeffs(self, fn: Callable[[QtScalar], QtScalar]) -> "Poly":
        return Poly({m: fn(c) for m, c in self.terms.items()}, self.rank)


def poly_arith(a: Poly, b: Poly, op: str) -> Poly:
    """add | sub | mul with automatic rank promotion."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def divided_difference_quotient(h: Poly, i: int, j: int) -> Poly:
    """Exact quotient h / (x_i - x_j), by synthetic division in x_i.

    Writing h = sum_a g_a * x_i^a with coefficients in the remaining
    variables, the quotient satisfies q_{a-1} = g_a + x_j * q_a going down
    from the top degree; the final carry must vanish or the division was
    not exact (InexactDivision — a bug, not a data condition).
    """
    if not h.terms:
        return Poly.zero(h.rank)
    buckets: dict[int, dict[Monomial, QtScalar]] = {}
    for m, c in h.terms.items():
        buckets.setdefault(m.exp(i), {})[m.without(i)] = c
    hi, lo = max(buckets), min(buckets)
    out: dict[Monomial, QtScalar] = {}
    carry: dict[Monomial, QtScalar] = {}
    for a in range(hi, lo - 1, -1):
        cur = dict(buckets.get(a, {}))
        for rest, c in carry.items():
            rest_j = rest.mul_var(j, 1)
            s = cur.get(rest_j)
            cur[rest_j] = c if s is None else s + c
        cur = {rest: c for rest, c in cur.items() if c}
        if a > lo:
            for rest, c in cur.items():
                out[rest.mul_var(i, a - 1)] = c
            carry = cur
        elif cur:
            raise InexactDivision(
                f"(x{i} - x{j}) does not divide; remainder at bottom degree {lo}"
            )
    return Poly(out, h.rank)


def demazure_lusztig(i: int, direction: int, f: Poly) -> Poly:
    """Apply T_i (direction=+1) or its inverse T_i^{-1} = t^{-1}(T_i + t - 1)."""
    if not 1 <= i <= f.rank - 1:
        raise IndexOutOfRank(f"T_{i} needs rank >= {i + 1}, got {f.rank}")
    if direction == -1:
        return demazure_lusztig(i, +1, f).scale(_T_INV) + f.scale(
            _T_MINUS_ONE * _T_INV
        )
    g = f.swap_vars(i, i + 1)
    diff = f - g
    if not diff:
        return f
    quot = divided_difference_quotient(diff, i, i + 1)
    return g + quot.mul_var(i, 1).scale(_ONE_MINUS_T)


def set_var_zero(k: int, f: Poly, side: str = "auto") -> Poly:
    """Substitute x_k = 0.

    On the plus side positive x_k-powers die; on the minus side (all
    exponents <= 0) the inverse variable x_k^{-1} is sent to 0 instead.
    side="auto" infers which rule applies from the stored exponents and
    refuses genuinely mixed inputs.  When k equals the rank, the result
    lives one rank down.
    """
    if not 1 <= k <= f.rank:
        raise IndexOutOfRank(f"x{k} not in rank {f.rank}")
    exps = [m.exp(k) for m in f.terms]
    has_pos = any(e > 0 for e in exps)
    has_neg = any(e < 0 for e in exps)
    if side == "auto":
        if has_pos and has_neg:
            raise NegativeExponentAtZero(
                f"x{k} appears with both signs; specify a side"
            )
        side = "minus" if has_neg else "plus"
    if side == "plus" and has_neg:
        raise NegativeExponentAtZero(f"negative x{k}-exponent on the plus side")
    if side == "minus" and has_pos:
        raise SignatureViolation(f"positive x{k}-exponent on the minus side")
    kept = {m: c for m, c in f.terms.items() if m.exp(k) == 0}
    rank = f.rank - 1 if k == f.rank else f.rank
    return Poly(kept, rank)


def project_pr(i: int, f: Poly) -> Poly:
    """Keep exactly the terms divisible by x_i (plus side only)."""
    if not 1 <= i <= f.rank:
        raise IndexOutOfRank(f"x{i} not in rank {f.rank}")
    if f.signature != "plus":
        raise SignatureViolation("pr_i is defined on the polynomial part")
    return Poly({m: c for m, c in f.terms.items() if m.exp(i) >= 1}, f.rank)


def constant_term(i: int, f: Poly) -> Poly:
    """The part of f of x_i-degree zero."""
    return Poly({m: c for m, c in f.terms.items() if m.exp(i) == 0}, f.rank)


# -- spanning-set generators (shared by the relation suites) -----------------


def monomials_of_degree(rank: int, d: int) -> Iterator[Monomial]:
    """All plus monomials in x_1..x_rank of total degree exactly d."""
    if rank == 0:
        if d == 0:
            yield MONE
        return

    def rec(idx: int, remaining: int):
        if idx == rank:
            yield ((rank, remaining),) if remaining else ()
            return
        for e in range(remaining, -1, -1):
            for tail in rec(idx + 1, remaining - e):
                yield (((idx, e),) + tail) if e else tail

    for exps in rec(1, d):
        yield Monomial(exps)


def monomials_up_to_degree(rank: int, d: int) -> Iterator[Monomial]:
    for dd in range(d + 1):
        yield from monomials_of_degree(rank, dd)


def laurent_box(rank: int, d: int) -> Iterator[Monomial]:
    """All Laurent monomials with every exponent in [-d, d]."""
    def rec(idx: int):
        if idx > rank:
            yield ()
            return
        for tail in rec(idx + 1):
            for e in range(-d, d + 1):
                yield (((idx, e),) + tail) if e else tail

    for exps in rec(1):
        yield Monomial(exps)


def minus_monomials_up_to_degree(rank: int, d: int) -> Iterator[Monomial]:
    """Monomials with all exponents <= 0 and total inverse degree <= d."""
    for m in monomials_up_to_degree(rank, d):
        yield m.pow(-1)


# -- printing ---------------------------------------------------------------


def format_poly(f: Poly, var: str = "x") -> str:
    if not f.terms:
        return "0"
    chunks: list[str] = []
    for m in sorted(f.terms, key=_grade_key):
        c = f.terms[m]
        mono = format_monomial(m, var)
        cs = format_scalar(c)
        if not mono:
            body = cs
        elif cs == "1":
            body = mono
        elif cs == "-1":
            body = f"-{mono}"
        else:
            body = f"{cs}*{mono}"
        if not chunks:
            chunks.append(body)
        elif body.startswith("-"):
            chunks.append(f" - {body[1:]}")
        else:
            chunks.append(f" + {body}")
    return "".join(chunks)


Poly.__repr__ = lambda self: format_poly(self)  # type: ignore[method-assign]
