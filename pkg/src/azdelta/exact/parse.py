"""Parse exact scalars, polynomials and rational functions from strings.

Accepted syntax: integers, ``p/q``, ``sqrt(d)``, variable names, ``+ - * / ^``
and parentheses.  Juxtaposition multiplies, so ``6(1+t)`` and ``3t^2`` work.
Floating point literals are rejected.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .poly import Poly
from .ratfn import RationalFn
from .scalar import Scalar, sqrt_scalar, to_scalar

_TOKEN = re.compile(r"\s*(?:(\d+\.\d*|\.\d+)|(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


class ParseError(ValueError):
    pass


def _tokenize(text: str) -> list[tuple[str, str]]:
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        pos = m.end()
        flt, num, name, op = m.groups()
        if flt:
            raise ParseError(f"floating point literal {flt!r} is not exact")
        if num:
            out.append(("num", num))
        elif name:
            out.append(("name", name))
        elif op and not op.isspace():
            if op not in "+-*/^()":
                raise ParseError(f"unexpected character {op!r} in {text!r}")
            out.append(("op", op))
    return out


class _Parser:
    """Recursive descent over a rational-function value domain."""

    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ParseError(f"unexpected {tok[1]!r} in {self.text!r}")
        self.i += 1
        return tok

    def parse(self):
        if not self.toks:
            raise ParseError("empty expression")
        v = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input {self.peek()[1]!r} in {self.text!r}")
        return v

    def expr(self):
        tok = self.peek()
        if tok == ("op", "-"):
            self.take()
            v = _neg(self.term())
        elif tok == ("op", "+"):
            self.take()
            v = self.term()
        else:
            v = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            v = _add(v, rhs) if op == "+" else _add(v, _neg(rhs))
        return v

    def term(self):
        v = self.power()
        while True:
            tok = self.peek()
            if tok in (("op", "*"), ("op", "/")):
                self.take()
                rhs = self.power()
                v = _mul(v, rhs) if tok[1] == "*" else _div(v, rhs)
            elif tok[0] in ("num", "name") or tok == ("op", "("):
                v = _mul(v, self.power())
            else:
                return v

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            neg = False
            if self.peek() == ("op", "-"):
                self.take()
                neg = True
            exp = int(self.take("num")[1])
            out = _pow(base, exp)
            return _div(Fraction(1), out) if neg else out
        return base

    def atom(self):
        tok = self.peek()
        if tok[0] == "num":
            self.take()
            return Fraction(int(tok[1]))
        if tok[0] == "name":
            self.take()
            if tok[1] == "sqrt":
                self.take("op", "(")
                arg = self.expr()
                self.take("op", ")")
                if not _is_const(arg):
                    raise ParseError("sqrt of a non-constant")
                return sqrt_scalar(_const(arg))
            return Poly.var(tok[1])
        if tok == ("op", "("):
            self.take()
            v = self.expr()
            self.take("op", ")")
            return v
        raise ParseError(f"unexpected {tok[1]!r} in {self.text!r}")


def _is_const(v) -> bool:
    if isinstance(v, Poly):
        return v.is_constant()
    if isinstance(v, RationalFn):
        return v.is_constant()
    return True


def _const(v) -> Scalar:
    if isinstance(v, (Poly, RationalFn)):
        return v.constant_value()
    return v


def _norm(v):
    if isinstance(v, RationalFn) and v.is_polynomial():
        return v.num
    if isinstance(v, Poly) and v.is_constant():
        return v.constant_value()
    return v


def _add(a, b):
    if isinstance(a, RationalFn) or isinstance(b, RationalFn):
        return _norm(RationalFn.coerce(a) + b)
    return _norm(Poly.coerce(a) + b)


def _neg(a):
    return _norm(-a)


def _mul(a, b):
    if isinstance(a, RationalFn) or isinstance(b, RationalFn):
        return _norm(RationalFn.coerce(a) * b)
    return _norm(Poly.coerce(a) * b)


def _div(a, b):
    if _is_const(b):
        c = _const(b)
        if c == 0:
            raise ParseError("division by zero")
        return _norm(a / c) if not isinstance(a, Poly) else _norm(a * (1 / c))
    return _norm(RationalFn.coerce(a) / b)


def _pow(a, n: int):
    if isinstance(a, RationalFn):
        return _norm(a**n)
    if isinstance(a, Poly):
        return _norm(a**n)
    return a**n


def _check(x):
    if isinstance(x, float):
        raise ParseError("floating point values are not exact")
    if isinstance(x, bool):
        raise ParseError("booleans are not numbers")


def parse_expr(text):
    """Parse into the simplest of ``Scalar``, :class:`Poly`, :class:`RationalFn`."""
    if isinstance(text, (Poly, RationalFn)):
        return text
    _check(text)
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(f"cannot parse {text!r}")
    return _Parser(text).parse()


def parse_scalar(text) -> Scalar:
    v = parse_expr(text)
    if not _is_const(v):
        raise ParseError(f"{text!r} is not a constant")
    return to_scalar(_const(v))


def parse_poly(text) -> Poly:
    v = parse_expr(text)
    if isinstance(v, RationalFn):
        if not v.is_polynomial():
            raise ParseError(f"{text!r} is not a polynomial")
        return v.num
    return Poly.coerce(v)


def parse_ratfn(text, var: str | None = None) -> RationalFn:
    v = parse_expr(text)
    return RationalFn.coerce(v if not isinstance(v, (int, Fraction)) else Poly.const(v), var)
