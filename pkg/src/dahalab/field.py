"""The coefficient field Q(q,t), exactly.

A scalar is a reduced fraction of sparse polynomials in t and q over the
rationals, kept in a canonical form that makes equality a structural
comparison: gcd(numerator, denominator) = 1 and the denominator is monic
with respect to the lexicographic order with t > q.  There is no floating
point anywhere; the ground arithmetic is sympy's sparse polynomial ring
over QQ (gmpy2 rationals).

Besides field arithmetic the type carries the two gauges the rest of the
engine runs on: the t-adic order (order of vanishing at t = 0, used by the
stable-limit machinery) and exact evaluation at rational points (used by
the randomized identity oracle).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from sympy.polys.domains import QQ
from sympy.polys.rings import ring

from .errors import DivisionByZero, PoleAtPoint, UndefinedOrder

_ring, _t, _q = ring("t,q", QQ, "lex")
_pone = _ring.one
_pzero = _ring.zero

Rational = Union[int, Fraction]


def _shift_monoms(p, dt: int, dq: int):
    """Divide p by the monomial t^dt q^dq (exponents must stay >= 0)."""
    return _ring.from_dict(
        {(et - dt, eq - dq): c for (et, eq), c in p.iterterms()}
    )


class QtScalar:
    """A reduced fraction num/den of polynomials in (t, q) over Q."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=_pone):
        # Raw constructor: callers inside this module guarantee canonical
        # form.  Everyone else goes through make().
        self.num = num
        self.den = den

    @staticmethod
    def make(num, den=_pone) -> "QtScalar":
        """Build a scalar from an arbitrary PolyElement pair, normalizing."""
        if not den:
            raise DivisionByZero("zero denominator")
        if not num:
            return ZERO
        if den == _pone:
            return QtScalar(num)
        if len(den) == 1:
            # Monomial denominator: cancel the common monomial content and
            # the ground coefficient.  No gcd call needed.
            (dt, dq) = next(iter(den.itermonoms()))
            dc = den.LC
            st = min(dt, min(m[0] for m in num.itermonoms()))
            sq = min(dq, min(m[1] for m in num.itermonoms()))
            if st or sq:
                num = _shift_monoms(num, st, sq)
                dt, dq = dt - st, dq - sq
            if dc != 1:
                num = num.quo_ground(dc)
            if dt == 0 and dq == 0:
                return QtScalar(num)
            return QtScalar(num, _ring.from_dict({(dt, dq): QQ(1)}))
        g = num.gcd(den)
        if g != _pone:
            num = num.quo(g)
            den = den.quo(g)
        lc = den.LC
        if lc != 1:
            num = num.quo_ground(lc)
            den = den.quo_ground(lc)
        if den == _pone:
            return QtScalar(num)
        return QtScalar(num, den)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_rational(c: Rational) -> "QtScalar":
        if isinstance(c, int):
            if c == 0:
                return ZERO
            if c == 1:
                return ONE
            return QtScalar(_ring.ground_new(QQ(c)))
        fr = Fraction(c)
        if fr == 0:
            return ZERO
        return QtScalar(_ring.ground_new(QQ(fr.numerator, fr.denominator)))

    @staticmethod
    def monomial(c: Rational, qexp: int, texp: int) -> "QtScalar":
        """The scalar c * q^qexp * t^texp, exponents of either sign."""
        fr = Fraction(c)
        if fr == 0:
            return ZERO
        coeff = QQ(fr.numerator, fr.denominator)
        nt, nq = max(texp, 0), max(qexp, 0)
        dt, dq = max(-texp, 0), max(-qexp, 0)
        num = _ring.from_dict({(nt, nq): coeff})
        if dt == 0 and dq == 0:
            return QtScalar(num)
        return QtScalar(num, _ring.from_dict({(dt, dq): QQ(1)}))

    # -- ring structure ----------------------------------------------------

    def __add__(self, other) -> "QtScalar":
        other = coerce(other)
        if self.den == other.den:
            if self.den == _pone:
                s = self.num + other.num
                return QtScalar(s) if s else ZERO
            return QtScalar.make(self.num + other.num, self.den)
        return QtScalar.make(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self) -> "QtScalar":
        if not self.num:
            return self
        return QtScalar(-self.num, self.den)

    def __sub__(self, other) -> "QtScalar":
        return self + (-coerce(other))

    def __rsub__(self, other) -> "QtScalar":
        return coerce(other) + (-self)

    def __mul__(self, other) -> "QtScalar":
        other = coerce(other)
        if not self.num or not other.num:
            return ZERO
        if self.den == _pone and other.den == _pone:
            return QtScalar(self.num * other.num)
        return QtScalar.make(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "QtScalar":
        other = coerce(other)
        if not other.num:
            raise DivisionByZero("division by zero scalar")
        return QtScalar.make(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "QtScalar":
        return coerce(other) / self

    def __pow__(self, n: int) -> "QtScalar":
        if n == 0:
            return ONE
        if n < 0:
            return self.inverse() ** (-n)
        if n == 1:
            return self
        # Coprime numerator/denominator stay coprime under powers and the
        # monic denominator stays monic, so no re-normalization is needed.
        return QtScalar(self.num**n, self.den**n)

    def inverse(self) -> "QtScalar":
        if not self.num:
            raise DivisionByZero("inverse of zero")
        return QtScalar.make(self.den, self.num)

    # -- structure queries -------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_one(self) -> bool:
        return self.den == _pone and self.num == _pone

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QtScalar.from_rational(other)
        if not isinstance(other, QtScalar):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return format_scalar(self)

    # -- parameter plumbing -------------------------------------------------

    def raise_params(self, n: int) -> "QtScalar":
        """Substitute q -> q^n, t -> t^n (the plethystic parameter raise)."""
        if n == 1 or not self.num:
            return self
        num = _ring.from_dict(
            {(et * n, eq * n): c for (et, eq), c in self.num.iterterms()}
        )
        den = _ring.from_dict(
            {(et * n, eq * n): c for (et, eq), c in self.den.iterterms()}
        )
        # Coprimality is not guaranteed to survive the substitution, so
        # renormalize from scratch.
        return QtScalar.make(num, den)


def coerce(value) -> QtScalar:
    """Accept QtScalar, int, or Fraction wherever a scalar is expected."""
    if isinstance(value, QtScalar):
        return value
    if isinstance(value, (int, Fraction)):
        return QtScalar.from_rational(value)
    raise TypeError(f"cannot treat {value!r} as a q,t-scalar")


ZERO = QtScalar(_pzero)
ONE = QtScalar(_pone)
T = QtScalar(_t)
Q = QtScalar(_q)


def qpow(n: int) -> QtScalar:
    return QtScalar.monomial(1, n, 0)


def tpow(n: int) -> QtScalar:
    return QtScalar.monomial(1, 0, n)


def qt_arith(a: QtScalar, b: QtScalar, op: str) -> QtScalar:
    """Field arithmetic dispatch: op is one of add|sub|mul|div."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def _t_min(p) -> int:
    return min(m[0] for m in p.itermonoms())


def t_order(a: QtScalar) -> int:
    """Order of vanishing at t = 0: ord_t(num) - ord_t(den)."""
    if not a.num:
        raise UndefinedOrder("t-adic order of 0 is +infinity")
    return _t_min(a.num) - _t_min(a.den)


def eval_at(a: QtScalar, q0: Rational, t0: Rational) -> Fraction:
    """Evaluate exactly at the rational point (q0, t0)."""
    fq, ft = Fraction(q0), Fraction(t0)
    subs = [(_t, QQ(ft.numerator, ft.denominator)), (_q, QQ(fq.numerator, fq.denominator))]
    dval = a.den.evaluate(subs) if a.den != _pone else QQ(1)
    if not dval:
        raise PoleAtPoint(f"denominator vanishes at q={q0}, t={t0}")
    if not a.num:
        return Fraction(0)
    nval = a.num.evaluate(subs)
    out = nval / dval
    return Fraction(int(out.numerator), int(out.denominator))


# -- printing ---------------------------------------------------------------


def _term_sort_key(m):
    # ascending total degree, then q before t (reads "1 + q - t^2 ...")
    return (m[0] + m[1], m[0], -m[1])


def _fmt_coeff(c) -> str:
    fr = Fraction(int(c.numerator), int(c.denominator))
    return str(fr)


def _fmt_monom(et: int, eq: int) -> str:
    parts = []
    if eq:
        parts.append("q" if eq == 1 else f"q^{eq}")
    if et:
        parts.append("t" if et == 1 else f"t^{et}")
    return "*".join(parts)


def _fmt_poly(p) -> str:
    """Render a plain polynomial, terms in ascending graded order."""
    terms = sorted(p.iterterms(), key=lambda tc: _term_sort_key(tc[0]))
    chunks: list[str] = []
    for (et, eq), c in terms:
        mono = _fmt_monom(et, eq)
        fr = Fraction(int(c.numerator), int(c.denominator))
        mag = abs(fr)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not chunks:
            chunks.append(body if fr > 0 else f"-{body}")
        else:
            chunks.append(f"+{body}" if fr > 0 else f"-{body}")
    return "".join(chunks) or "0"


def format_scalar(a: QtScalar) -> str:
    """Canonical text form: "q*t^-1", "q*(1-t)/(q-t)", "-1/2", ...

    The monomial content of the numerator is split off so that products
    print factored (q - q*t becomes q*(1-t)); a monomial denominator is
    folded in as negative exponents.  Multi-term denominators print as
    /(...) and everything round-trips through the expression grammar.
    """
    if not a.num:
        return "0"
    num, den = a.num, a.den
    if den != _pone and len(den) > 1:
        # The canonical denominator is monic for the lex order, which can
        # put its graded-display leading term negative (t - q).  Flip both
        # parts for display so the text reads (q - t); value unchanged.
        first = min(den.iterterms(), key=lambda tc: _term_sort_key(tc[0]))
        if first[1] < 0:
            num, den = -num, -den
    st = min(m[0] for m in num.itermonoms())
    sq = min(m[1] for m in num.itermonoms())
    residual = _shift_monoms(num, st, sq) if (st or sq) else num
    # fold a monomial denominator into the content exponents
    dt = dq = 0
    den_str = ""
    if den != _pone:
        if len(den) == 1:
            (dt, dq) = next(iter(den.itermonoms()))
        else:
            den_str = f"/({_fmt_poly(den)})"
    et, eq = st - dt, sq - dq
    factors: list[str] = []
    sign = ""
    if len(residual) == 1:
        c = residual.LC
        fr = Fraction(int(c.numerator), int(c.denominator))
        if fr < 0:
            sign, fr = "-", -fr
        if fr != 1 or (not et and not eq):
            factors.append(str(fr))
    mono = _fmt_monom(et, eq)
    if mono:
        factors.append(mono)
    if len(residual) > 1:
        factors.append(f"({_fmt_poly(residual)})")
    return sign + "*".join(factors) + den_str
