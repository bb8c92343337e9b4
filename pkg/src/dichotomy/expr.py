"""Rational expressions in ``z``: tokenizer, recursive-descent parser, printer.

Grammar (whitespace ignored)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := ("+" | "-") unary | power
    power   := atom ("^" ["+" | "-"] INTEGER)?
    atom    := NUMBER ["i"] | "i" | "z" | "(" expr ")"
    NUMBER  := DIGITS ["." DIGITS] [("e" | "E") ["+" | "-"] DIGITS]

A literal is either real (``2.5``) or purely imaginary (``3i``, ``i``);
``a+bi`` is the sum of two literals.  Unary ``+`` is accepted and dropped.
Division by a constant subexpression that is exactly zero is rejected at
parse time.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Union

__all__ = [
    "ParseError",
    "Num",
    "Var",
    "Neg",
    "BinOp",
    "Pow",
    "Expr",
    "parse",
    "pretty",
    "QI",
    "Poly",
    "RationalFunction",
    "to_rational_function",
]


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.message = message
        self.offset = offset


def _is_decimal(q: Fraction) -> bool:
    d = q.denominator
    for f in (2, 5):
        while d % f == 0:
            d //= f
    return d == 1


@dataclass(frozen=True)
class Num:
    """Literal ``re + i*im``: non-negative real, or positive imaginary."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))
        if self.im != 0 and self.re != 0:
            raise ValueError("literal must be purely real or purely imaginary")
        if self.re < 0 or self.im < 0:
            raise ValueError("literals are non-negative; use Neg")
        if not (_is_decimal(self.re) and _is_decimal(self.im)):
            raise ValueError("literal must have a terminating decimal expansion")


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"

    def __post_init__(self):
        if self.op not in "+-*/" or len(self.op) != 1:
            raise ValueError(f"unknown operator {self.op!r}")


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


Expr = Union[Num, Var, Neg, BinOp, Pow]


# ---------------------------------------------------------------- tokenizer

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)|(?P<name>[zi])|(?P<op>[-+*/^()]))"
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(src: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(src):
        if src[pos:].strip() == "":
            break
        m = _TOKEN.match(src, pos)
        if m is None:
            bad = pos + len(src[pos:]) - len(src[pos:].lstrip())
            raise ParseError(f"unexpected character {src[bad]!r}", bad)
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(_Tok("eof", "", len(src)))
    return toks


# ------------------------------------------------------------------- parser


class _Parser:
    def __init__(self, src: str):
        self.toks = _tokenize(src)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect_op(self, text: str) -> _Tok:
        t = self.take()
        if t.text != text or t.kind != "op":
            raise ParseError(f"expected {text!r}", t.pos)
        return t

    def parse(self) -> Expr:
        node = self.expr()
        t = self.peek()
        if t.kind != "eof":
            raise ParseError(f"unexpected {t.text!r}", t.pos)
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.take().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.peek().kind == "op" and self.peek().text in "*/":
            tok = self.take()
            right = self.unary()
            if tok.text == "/" and _constant_zero(right):
                raise ParseError("division by constant zero", tok.pos)
            node = BinOp(tok.text, node, right)
        return node

    def unary(self) -> Expr:
        t = self.peek()
        if t.kind == "op" and t.text == "-":
            self.take()
            return Neg(self.unary())
        if t.kind == "op" and t.text == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            caret = self.take()
            sign = 1
            t = self.peek()
            if t.kind == "op" and t.text in "+-":
                sign = -1 if t.text == "-" else 1
                self.take()
                t = self.peek()
            if t.kind != "num" or not t.text.isdigit():
                raise ParseError("expected integer exponent", t.pos)
            self.take()
            n = sign * int(t.text)
            if n < 0 and _constant_zero(base):
                raise ParseError("division by constant zero", caret.pos)
            return Pow(base, n)
        return base

    def atom(self) -> Expr:
        t = self.take()
        if t.kind == "num":
            value = Fraction(t.text)
            nxt = self.peek()
            if nxt.kind == "name" and nxt.text == "i" and nxt.pos == t.pos + len(t.text):
                self.take()
                return Num(0, value)
            return Num(value, 0)
        if t.kind == "name":
            return Var() if t.text == "z" else Num(0, 1)
        if t.kind == "op" and t.text == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        if t.kind == "eof":
            raise ParseError("unexpected end of input", t.pos)
        raise ParseError(f"unexpected {t.text!r}", t.pos)


def parse(src: str) -> Expr:
    """Parse ``src`` into an expression tree; raises :class:`ParseError`."""
    return _Parser(src).parse()


# ------------------------------------------------------------------ printer

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _prec(node: Expr) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return 3
    if isinstance(node, Pow):
        return 4
    return 5


def _fmt_decimal(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    k = 0
    while (q * 10**k).denominator != 1:
        k += 1
    digits = str((q * 10**k).numerator).rjust(k + 1, "0")
    return f"{digits[:-k]}.{digits[-k:]}"


def pretty(node: Expr) -> str:
    """Render with the fewest parentheses that re-parse to the same tree."""
    if isinstance(node, Num):
        if node.im != 0:
            return "i" if node.im == 1 else _fmt_decimal(node.im) + "i"
        return _fmt_decimal(node.re)
    if isinstance(node, Var):
        return "z"
    if isinstance(node, Neg):
        inner = pretty(node.operand)
        if _prec(node.operand) < 3:
            inner = f"({inner})"
        return "-" + inner
    if isinstance(node, Pow):
        base = pretty(node.base)
        if _prec(node.base) < 5 or (isinstance(node.base, Num) and node.base.im != 0):
            base = f"({base})"
        return f"{base}^{node.exponent}"
    p = _PREC[node.op]
    left = pretty(node.left)
    if _prec(node.left) < p:
        left = f"({left})"
    right = pretty(node.right)
    if _prec(node.right) <= p:
        right = f"({right})"
    sep = f" {node.op} " if p == 1 else node.op
    return f"{left}{sep}{right}"


# ------------------------------------------------ exact rational functions


@dataclass(frozen=True)
class QI:
    """Gaussian rational ``re + i*im`` with exact Fraction parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __add__(self, o: "QI") -> "QI":
        return QI(self.re + o.re, self.im + o.im)

    def __sub__(self, o: "QI") -> "QI":
        return QI(self.re - o.re, self.im - o.im)

    def __neg__(self) -> "QI":
        return QI(-self.re, -self.im)

    def __mul__(self, o: "QI") -> "QI":
        return QI(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    def inverse(self) -> "QI":
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return QI(self.re / n, -self.im / n)

    def __truediv__(self, o: "QI") -> "QI":
        return self * o.inverse()

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))


_ZERO = QI()
_ONE = QI(Fraction(1))


class Poly(tuple):
    """Coefficients over :class:`QI`, lowest degree first, no trailing zeros."""

    def __new__(cls, coeffs=()):
        cs = list(coeffs)
        while cs and not cs[-1]:
            cs.pop()
        return super().__new__(cls, cs)

    @property
    def degree(self) -> int:
        return len(self) - 1

    def __add__(self, o):
        n = max(len(self), len(o))
        return Poly(
            (self[k] if k < len(self) else _ZERO) + (o[k] if k < len(o) else _ZERO)
            for k in range(n)
        )

    def __neg__(self):
        return Poly(-c for c in self)

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        if not self or not o:
            return Poly()
        out = [_ZERO] * (len(self) + len(o) - 1)
        for i, a in enumerate(self):
            for j, b in enumerate(o):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    def scale(self, c: QI):
        return Poly(a * c for a in self)

    def divmod(self, o):
        if not o:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self)
        q = [_ZERO] * max(len(self) - len(o) + 1, 1)
        lead_inv = o[-1].inverse()
        while len(rem) >= len(o) and rem:
            c = rem[-1] * lead_inv
            shift = len(rem) - len(o)
            q[shift] = c
            for j, b in enumerate(o):
                rem[shift + j] = rem[shift + j] - c * b
            rem.pop()
            while rem and not rem[-1]:
                rem.pop()
        return Poly(q), Poly(rem)

    def monic(self):
        return self.scale(self[-1].inverse()) if self else self

    def gcd(self, o):
        a, b = self, o
        while b:
            a, b = b, a.divmod(b)[1]
        return a.monic()

    def __call__(self, z: QI) -> QI:
        acc = _ZERO
        for c in reversed(self):
            acc = acc * z + c
        return acc


@dataclass(frozen=True)
class RationalFunction:
    """``num/den`` in lowest terms with a monic denominator."""

    num: Poly
    den: Poly

    @cached_property
    def poles(self) -> list[complex]:
        import numpy as np

        if self.den.degree < 1:
            return []
        return [complex(r) for r in np.roots([complex(c) for c in reversed(self.den)])]

    @property
    def infinite_at_infinity(self) -> bool:
        return self.num.degree > self.den.degree

    def value_at_infinity(self) -> QI | None:
        """Limit at infinity; ``None`` when it is infinite."""
        if not self.num:
            return _ZERO
        if self.num.degree > self.den.degree:
            return None
        if self.num.degree < self.den.degree:
            return _ZERO
        return self.num[-1] / self.den[-1]


def _poly_const(c: QI) -> Poly:
    return Poly([c])


def _rat(node: Expr) -> tuple[Poly, Poly]:
    if isinstance(node, Num):
        return _poly_const(QI(node.re, node.im)), _poly_const(_ONE)
    if isinstance(node, Var):
        return Poly([_ZERO, _ONE]), _poly_const(_ONE)
    if isinstance(node, Neg):
        n, d = _rat(node.operand)
        return -n, d
    if isinstance(node, Pow):
        n, d = _rat(node.base)
        e = node.exponent
        if e < 0:
            if not n:
                raise ZeroDivisionError("zero to a negative power")
            n, d, e = d, n, -e
        rn, rd = _poly_const(_ONE), _poly_const(_ONE)
        for _ in range(e):
            rn, rd = rn * n, rd * d
        return rn, rd
    ln, ld = _rat(node.left)
    rn, rd = _rat(node.right)
    if node.op == "+":
        return ln * rd + rn * ld, ld * rd
    if node.op == "-":
        return ln * rd - rn * ld, ld * rd
    if node.op == "*":
        return ln * rn, ld * rd
    if not rn:
        raise ZeroDivisionError("division by identically zero expression")
    return ln * rd, ld * rn


def to_rational_function(node: Expr) -> RationalFunction:
    """Reduce an expression tree to lowest terms exactly."""
    num, den = _rat(node)
    if not num:
        return RationalFunction(Poly(), _poly_const(_ONE))
    g = num.gcd(den)
    num = num.divmod(g)[0]
    den = den.divmod(g)[0]
    lead = den[-1].inverse()
    return RationalFunction(num.scale(lead), den.scale(lead))


def _constant_zero(node: Expr) -> bool:
    """True when ``node`` is free of ``z`` and evaluates exactly to 0."""
    if _has_var(node):
        return False
    try:
        num, _ = _rat(node)
    except ZeroDivisionError:
        return False
    return not num


def _has_var(node: Expr) -> bool:
    if isinstance(node, Var):
        return True
    if isinstance(node, Num):
        return False
    if isinstance(node, Neg):
        return _has_var(node.operand)
    if isinstance(node, Pow):
        return _has_var(node.base)
    return _has_var(node.left) or _has_var(node.right)
