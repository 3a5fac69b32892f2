"""Command-line front end: parse, apply, verify, report.

Five verbs.  `apply` runs an operator word over a parsed element and
prints the result; `print` just parses and reprints (the canonical form);
`macdonald` prints a joint eigenfunction; `suite` runs one of the
registered relation suites and reports; `limit-check` runs the t-adic
convergence screen on a named reference sequence.

Expressions follow a small grammar shared by both sides of the tower:

    expr   := ['-'] term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := atom ['^' ['-'] int]
    atom   := int | 'q' | 't' | x<int> | y<int> | sym | '(' expr ')'
    sym    := ('m' | 'p' | 'h' | 'e') '[' int (',' int)* ']'

x-variables live on side P, y-variables on side V; sym atoms are tail
symmetric functions on side P and coefficients in X on side V.  Division
is exact and only by scalars (rational functions in q, t).  Operator
words are whitespace- or '∘'-separated generator names, rightmost acting
first, e.g. "T(1) Y(2)".  Exit status: 0 for success or a passing
report, 1 for a failing report, 2 for usage, parse, or domain errors.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Callable, Sequence

from .asym import (
    AlmostSym,
    apply_limit_T,
    apply_limit_Tinv,
    apply_limit_X,
    apply_limit_Y,
    format_almost_sym,
    limit_verify,
)
from .daha_deformed import app_W, app_Ytilde, app_Ztilde, app_varpi
from .daha_finite import FiniteGenerator, app_affine_T0, apply_word, macdonald_ns
from .ddpa import VElement, apply_arrow, apply_loop, format_velement
from .errors import (
    DahaLabError,
    ExprSyntaxError,
    RankViolation,
    UnknownSymbol,
)
from .field import ONE, Q, T, coerce, tpow
from .polyring import Monomial, Poly, format_poly
from .quiver import partial, partial_minus, partial_star
from .reports import Report, default_jobs, run_suite
from .symfunc import EMPTY, SymFunc, expand_to_vars

__all__ = ["parse_expr", "parse_op_word", "execute", "main"]

SUITES = ("finite", "projection", "deformed", "stable", "atq", "quiverrep", "isom")


# -- expression scanner ---------------------------------------------------------

_PUNCT = set("+-*/^()[],")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks: list[tuple[str, str, int]] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in _PUNCT:
            toks.append((c, c, i))
            i += 1
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(("int", text[i:j], i))
            i = j
            continue
        if c.isalpha():
            j = i
            while j < n and text[j].isalpha():
                j += 1
            while j < n and text[j].isdigit():
                j += 1
            toks.append(("name", text[i:j], i))
            i = j
            continue
        raise ExprSyntaxError(f"unexpected character {c!r}", i)
    return toks


class _Val:
    """Either a scalar or an element; exactly one slot is set."""

    __slots__ = ("scalar", "elem")

    def __init__(self, scalar=None, elem=None):
        self.scalar = scalar
        self.elem = elem


class _Parser:
    def __init__(self, text: str, side: str, rank: int):
        self.text = text
        self.side = side
        self.rank = rank
        self.toks = _tokenize(text)
        self.i = 0

    # -- token plumbing --

    def _peek(self) -> tuple[str, str, int] | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def _take(self) -> tuple[str, str, int]:
        tok = self._peek()
        if tok is None:
            raise ExprSyntaxError("unexpected end of expression", len(self.text))
        self.i += 1
        return tok

    def _expect(self, kind: str) -> tuple[str, str, int]:
        tok = self._take()
        if tok[0] != kind:
            raise ExprSyntaxError(f"expected {kind!r}, got {tok[1]!r}", tok[2])
        return tok

    # -- value algebra --

    def _one(self):
        if self.side == "P":
            return AlmostSym.one(self.rank)
        return VElement.one(self.rank)

    def _promote(self, v: _Val):
        if v.elem is not None:
            return v.elem
        return self._one().scale(v.scalar)

    def _add(self, a: _Val, b: _Val, sign: int) -> _Val:
        if a.scalar is not None and b.scalar is not None:
            return _Val(scalar=a.scalar + b.scalar if sign > 0 else a.scalar - b.scalar)
        x, y = self._promote(a), self._promote(b)
        return _Val(elem=x + y if sign > 0 else x - y)

    def _mul(self, a: _Val, b: _Val) -> _Val:
        if a.scalar is not None and b.scalar is not None:
            return _Val(scalar=a.scalar * b.scalar)
        if a.scalar is not None:
            return _Val(elem=b.elem.scale(a.scalar))
        if b.scalar is not None:
            return _Val(elem=a.elem.scale(b.scalar))
        return _Val(elem=a.elem * b.elem)

    def _div(self, a: _Val, b: _Val, at: int) -> _Val:
        if b.scalar is None:
            raise ExprSyntaxError("division is only by scalars", at)
        if not b.scalar:
            raise ExprSyntaxError("division by zero", at)
        if a.scalar is not None:
            return _Val(scalar=a.scalar / b.scalar)
        return _Val(elem=a.elem.scale(ONE / b.scalar))

    # -- grammar --

    def parse(self):
        v = self._expr()
        tok = self._peek()
        if tok is not None:
            raise ExprSyntaxError(f"unexpected trailing {tok[1]!r}", tok[2])
        return self._promote(v)

    def _expr(self) -> _Val:
        tok = self._peek()
        if tok is not None and tok[0] == "-":
            self._take()
            v = self._mul(_Val(scalar=-ONE), self._term())
        else:
            v = self._term()
        while True:
            tok = self._peek()
            if tok is None or tok[0] not in "+-":
                return v
            self._take()
            v = self._add(v, self._term(), +1 if tok[0] == "+" else -1)

    def _term(self) -> _Val:
        v = self._factor()
        while True:
            tok = self._peek()
            if tok is None or tok[0] not in "*/":
                return v
            self._take()
            rhs = self._factor()
            v = self._mul(v, rhs) if tok[0] == "*" else self._div(v, rhs, tok[2])

    def _signed_int(self) -> int:
        sign = 1
        tok = self._peek()
        if tok is not None and tok[0] == "-":
            self._take()
            sign = -1
        return sign * int(self._expect("int")[1])

    def _factor(self) -> _Val:
        v, var_index = self._atom()
        tok = self._peek()
        if tok is None or tok[0] != "^":
            return v
        self._take()
        at = tok[2]
        e = self._signed_int()
        if v.scalar is not None:
            acc = ONE
            for _ in range(abs(e)):
                acc = acc * v.scalar
            return _Val(scalar=acc if e >= 0 else ONE / acc)
        if e >= 0:
            acc_v = _Val(scalar=ONE)
            for _ in range(e):
                acc_v = self._mul(acc_v, v)
            return acc_v
        if var_index is None or self.side != "P":
            raise ExprSyntaxError("negative exponents need a scalar or an x variable", at)
        return _Val(elem=AlmostSym.from_poly(Poly.var(var_index, self.rank, e)))

    def _atom(self) -> tuple[_Val, int | None]:
        """Returns the value plus the variable index when the atom is a bare variable."""
        tok = self._take()
        kind, text, at = tok
        if kind == "int":
            return _Val(scalar=coerce(int(text))), None
        if kind == "(":
            v = self._expr()
            self._expect(")")
            return v, None
        if kind != "name":
            raise ExprSyntaxError(f"unexpected {text!r}", at)

        m = re.fullmatch(r"([A-Za-z]+)(\d*)", text)
        letters, digits = m.group(1), m.group(2)
        if letters == "q" and not digits:
            return _Val(scalar=Q), None
        if letters == "t" and not digits:
            return _Val(scalar=T), None
        if letters in ("x", "y"):
            if not digits:
                raise UnknownSymbol(f"{letters!r} needs a variable index")
            i = int(digits)
            if letters == "x":
                if self.side != "P":
                    raise UnknownSymbol("x variables live on side P")
                if not 1 <= i <= self.rank:
                    raise RankViolation(f"x{i} does not fit rank {self.rank}")
                return _Val(elem=AlmostSym.from_poly(Poly.var(i, self.rank))), i
            if self.side != "V":
                raise UnknownSymbol("y variables live on side V")
            if not 1 <= i <= self.rank:
                raise RankViolation(f"y{i} does not fit rank {self.rank}")
            return _Val(elem=VElement.monomial(Monomial.var(i), self.rank)), i
        if letters in ("m", "p", "h", "e") and not digits:
            self._expect("[")
            parts = [self._expect("int")]
            while self._peek() is not None and self._peek()[0] == ",":
                self._take()
                parts.append(self._expect("int"))
            self._expect("]")
            vals = [int(p[1]) for p in parts]
            for p, tokp in zip(vals, parts):
                if p < 1:
                    raise ExprSyntaxError("partition parts are positive", tokp[2])
            F = SymFunc.gen(letters, *vals)
            if self.side == "P":
                return _Val(elem=AlmostSym.from_sym(F, self.rank)), None
            return _Val(elem=VElement.from_sym(F, self.rank)), None
        raise UnknownSymbol(f"unknown symbol {text!r}")


def parse_expr(text: str, side: str, rank: int):
    """Parse to an AlmostSym (side "P") or VElement (side "V") at the rank."""
    if side not in ("P", "V"):
        raise UnknownSymbol(f"side must be P or V, got {side!r}")
    if rank < 0:
        raise RankViolation(f"negative rank {rank}")
    return _Parser(text, side, rank).parse()


# -- operator words ---------------------------------------------------------------

_P_FINITE_NAMED = {
    "omega": "Omega",
    "omega_inv": "OmegaInv",
    "otilde": "OmegaTilde",
    "otilde_inv": "OmegaTildeInv",
}
_P_FINITE_INDEXED = ("T", "Tinv", "X", "Xinv", "Y", "Yinv")
_P_DEFORMED_INDEXED = {"Ytilde": app_Ytilde, "W": app_W, "Ztilde": app_Ztilde}
_P_STABLE_INDEXED = {
    "limT": apply_limit_T,
    "limTinv": apply_limit_Tinv,
    "limX": apply_limit_X,
    "limY": apply_limit_Y,
}
_P_ARROWS = {"raise": partial, "star": partial_star, "lower": partial_minus}
_V_LOOPS = ("T", "Tinv", "y", "z")
_V_ARROWS = {"dplus": "Dplus", "dminus": "Dminus", "dstar": "DplusStar"}


def _poly_part(F: AlmostSym, opname: str) -> Poly:
    if any(lam != EMPTY for lam in F.terms):
        raise RankViolation(f"{opname} is a finite operator; the element has a tail")
    return F.terms.get(EMPTY, Poly.zero(F.rank))


def parse_op_word(word: str, side: str) -> list[Callable]:
    """One callable per generator, in display order (rightmost acts first)."""
    steps: list[Callable] = []
    for raw in word.replace("∘", " ").split():
        m = re.fullmatch(r"([A-Za-z_]+)(?:\((-?\d+)\))?", raw)
        if m is None:
            raise ExprSyntaxError(f"malformed generator {raw!r}", 0)
        name, idx = m.group(1), m.group(2)
        i = int(idx) if idx is not None else None

        if side == "V":
            if name in _V_LOOPS:
                if i is None:
                    raise ExprSyntaxError(f"{name} needs an index", 0)
                steps.append(lambda F, name=name, i=i: apply_loop(name, i, F))
            elif name in _V_ARROWS:
                steps.append(lambda F, k=_V_ARROWS[name]: apply_arrow(k, F))
            else:
                raise UnknownSymbol(f"unknown V-side operator {name!r}")
            continue

        if name in _P_FINITE_INDEXED:
            if i is None:
                raise ExprSyntaxError(f"{name} needs an index", 0)
            gen = FiniteGenerator(name, i)
            steps.append(
                lambda F, gen=gen, name=name: AlmostSym.from_poly(
                    apply_word([gen], _poly_part(F, name))
                )
            )
        elif name in _P_FINITE_NAMED:
            gen = FiniteGenerator(_P_FINITE_NAMED[name])
            steps.append(
                lambda F, gen=gen, name=name: AlmostSym.from_poly(
                    apply_word([gen], _poly_part(F, name))
                )
            )
        elif name == "T0":
            steps.append(
                lambda F: AlmostSym.from_poly(app_affine_T0(_poly_part(F, "T0")))
            )
        elif name == "varpi":
            steps.append(
                lambda F: AlmostSym.from_poly(app_varpi(_poly_part(F, "varpi")))
            )
        elif name in _P_DEFORMED_INDEXED:
            if i is None:
                raise ExprSyntaxError(f"{name} needs an index", 0)
            fn = _P_DEFORMED_INDEXED[name]
            steps.append(
                lambda F, fn=fn, i=i, name=name: AlmostSym.from_poly(
                    fn(i, _poly_part(F, name))
                )
            )
        elif name in _P_STABLE_INDEXED:
            if i is None:
                raise ExprSyntaxError(f"{name} needs an index", 0)
            fn = _P_STABLE_INDEXED[name]
            steps.append(lambda F, fn=fn, i=i: fn(i, F))
        elif name in _P_ARROWS:
            steps.append(_P_ARROWS[name])
        else:
            raise UnknownSymbol(f"unknown P-side operator {name!r}")
    return steps


def _format(elem) -> str:
    if isinstance(elem, AlmostSym):
        return format_almost_sym(elem)
    return format_velement(elem)


# -- reference sequences for the limit screen -------------------------------------


def _reference_sequence(name: str, i: int):
    """Named (sequence, candidate) pairs for `limit-check`.

    "geometric" carries the truncated 1/(1-t) sums onto e_i/(1-t);
    "vanishing" decays like t^m onto zero; "constant" is the negative
    control that converges to e_i but not t-adically to zero.
    """
    ei = SymFunc.gen("elementary", i)
    if name == "geometric":

        def gen(m: int) -> Poly:
            scale = sum((tpow(j) for j in range(m + 1)), coerce(0))
            return expand_to_vars(ei, m).scale(scale)

        return gen, AlmostSym.from_sym(ei, 0).scale(ONE / (ONE - T))
    if name == "vanishing":
        return (lambda m: expand_to_vars(ei, m).scale(tpow(m))), AlmostSym.zero(0)
    if name == "constant":
        return (lambda m: expand_to_vars(ei, m)), AlmostSym.zero(0)
    raise UnknownSymbol(f"unknown reference sequence {name!r}")


# -- verbs ------------------------------------------------------------------------


def _emit_result(args, payload: dict, text: str) -> None:
    if args.emit == "json":
        print(json.dumps(payload))
    else:
        print(text)


def _emit_report(args, rep: Report) -> int:
    if args.emit == "json":
        print(rep.to_json_str())
    else:
        print(rep.summary())
    return 0 if rep.passed else 1


def _cmd_apply(args) -> int:
    elem = parse_expr(args.expr, args.side, args.rank)
    steps = parse_op_word(args.op, args.side)
    for step in reversed(steps):
        elem = step(elem)
    out = _format(elem)
    _emit_result(
        args,
        {
            "verb": "apply",
            "side": args.side,
            "rank": args.rank,
            "op": args.op,
            "expr": args.expr,
            "result": out,
        },
        out,
    )
    return 0


def _cmd_print(args) -> int:
    out = _format(parse_expr(args.expr, args.side, args.rank))
    _emit_result(
        args,
        {"verb": "print", "side": args.side, "rank": args.rank, "expr": args.expr,
         "result": out},
        out,
    )
    return 0


def _cmd_macdonald(args) -> int:
    comp = tuple(int(s) for s in args.comp.split(","))
    out = format_poly(macdonald_ns(args.rank, comp))
    _emit_result(
        args,
        {"verb": "macdonald", "rank": args.rank, "comp": list(comp), "result": out},
        out,
    )
    return 0


def _cmd_suite(args) -> int:
    jobs = args.jobs if args.jobs is not None else default_jobs()
    rep = run_suite(args.name, args.rank, args.degree, jobs=jobs)
    return _emit_report(args, rep)


def _cmd_limit_check(args) -> int:
    gen, candidate = _reference_sequence(args.seq, args.index)
    lo, hi = (int(s) for s in args.window.split(","))
    rep = limit_verify(gen, candidate, (lo, hi))
    return _emit_report(args, rep)


_VERBS = {
    "apply": _cmd_apply,
    "print": _cmd_print,
    "macdonald": _cmd_macdonald,
    "suite": _cmd_suite,
    "limit-check": _cmd_limit_check,
}


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dahalab",
        description="Exact operator algebra on polynomials: apply, verify, report.",
    )
    sub = ap.add_subparsers(dest="verb", required=True)

    def common(p, side=True):
        if side:
            p.add_argument("--side", choices=("P", "V"), default="P")
            p.add_argument("--rank", type=int, required=True)
        p.add_argument("--emit", choices=("text", "json"), default="text")

    p = sub.add_parser("apply", help="apply an operator word to an expression")
    common(p)
    p.add_argument("--op", required=True, help='e.g. "Y(1)" or "T(1) T(2)"')
    p.add_argument("--expr", required=True)

    p = sub.add_parser("print", help="parse an expression and print its canonical form")
    common(p)
    p.add_argument("--expr", required=True)

    p = sub.add_parser("macdonald", help="print a joint eigenfunction")
    common(p, side=False)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--comp", required=True, help='composition, e.g. "0,1"')

    p = sub.add_parser("suite", help="run a relation suite")
    common(p, side=False)
    p.add_argument("--name", choices=SUITES, required=True)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--jobs", type=int, default=None,
                   help="worker processes (default: DAHA_LAB_JOBS or all cores)")

    p = sub.add_parser("limit-check", help="run the t-adic convergence screen")
    common(p, side=False)
    p.add_argument("--seq", choices=("geometric", "vanishing", "constant"),
                   required=True)
    p.add_argument("--index", type=int, default=1)
    p.add_argument("--window", default="3,6", help='rank window, e.g. "3,6"')

    return ap


def execute(args) -> int:
    """Run one parsed command; returns the exit status."""
    try:
        return _VERBS[args.verb](args)
    except ExprSyntaxError as e:
        _error_record(args, type(e).__name__, str(e), offset=e.offset)
        return 2
    except DahaLabError as e:
        _error_record(args, type(e).__name__, str(e))
        return 2
    except ValueError as e:
        _error_record(args, "ValueError", str(e))
        return 2


def _error_record(args, kind: str, message: str, offset: int | None = None) -> None:
    if getattr(args, "emit", "text") == "json":
        rec = {"error": kind, "message": message}
        if offset is not None:
            rec["offset"] = offset
        print(json.dumps(rec), file=sys.stderr)
    else:
        where = f" (offset {offset})" if offset is not None else ""
        print(f"error[{kind}]{where}: {message}", file=sys.stderr)


def main(argv: Sequence[str] | None = None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    return execute(args)


if __name__ == "__main__":
    sys.exit(main())
