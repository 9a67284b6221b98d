"""Coefficient expressions of one complex variable ``z``.

A small recursive-descent parser for the coefficient functions of the
equation, plus an evaluator that reports poles instead of returning
non-finite numbers.

Grammar::

    expr     := term (('+' | '-') term)*
    term     := unary (('*' | '/') unary)*
    unary    := ('-' | '+') unary | power
    power    := atom ['^' exponent]
    exponent := ['+' | '-'] INT | '(' ['+' | '-'] INT ')'
    atom     := NUMBER | IMAG | 'z' | 'i' | 'pi' | 'e'
              | ('exp' | 'sin' | 'cos') '(' expr ')'
              | '(' [sign] NUMBER sign IMAG ')'        # complex literal
              | '(' expr ')'

``IMAG`` is a number immediately followed by ``i`` (``2i``, ``0.5i``).
Exponents are restricted to integers so that every expression stays
single valued.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from typing import Callable, Iterable, Union

from .errors import (ExprSyntaxError, NonFiniteValue, NonIntegerExponent,
                     PoleError, PoleOnGrid, UnknownIdentifier)

#: divisors below this modulus are treated as poles
POLE_THRESHOLD = 1e-300

CONSTANTS = {"i": 1j, "pi": complex(math.pi), "e": complex(math.e)}
FUNCTIONS = {"exp": cmath.exp, "sin": cmath.sin, "cos": cmath.cos}


# -- tree -------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: complex


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Num, Const, Var, Neg, BinOp, Pow, Call]


def _fmt_literal(c: complex) -> str:
    re_, im = c.real, c.imag
    if im == 0 and re_ >= 0 and math.copysign(1.0, re_) > 0:
        return repr(re_)
    sign = "+" if im >= 0 else "-"
    return f"({re_!r}{sign}{abs(im)!r}i)"


def serialize(node: Node) -> str:
    """Fully parenthesized infix form; parses back to an equal tree."""
    if isinstance(node, Num):
        return _fmt_literal(node.value)
    if isinstance(node, Const):
        return node.name
    if isinstance(node, Var):
        return "z"
    if isinstance(node, Neg):
        return f"(-{serialize(node.arg)})"
    if isinstance(node, BinOp):
        return f"({serialize(node.left)}{node.op}{serialize(node.right)})"
    if isinstance(node, Pow):
        return f"({serialize(node.base)}^{node.exponent})"
    if isinstance(node, Call):
        return f"{node.func}({serialize(node.arg)})"
    raise TypeError(f"not an expression node: {node!r}")


# -- lexer ------------------------------------------------------------------

_NUMBER = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


@dataclass(frozen=True)
class _Tok:
    kind: str       # NUM, IMAG, IDENT, OP, EOF
    text: str
    value: complex
    offset: int


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        m = _NUMBER.match(text, pos)
        if m:
            end = m.end()
            val = float(m.group())
            if not math.isfinite(val):
                raise ExprSyntaxError(f"number out of range: {m.group()!r}",
                                      _byte_offset(text, pos))
            if end < n and text[end] == "i" and not (
                    end + 1 < n and (text[end + 1].isalnum() or text[end + 1] == "_")):
                toks.append(_Tok("IMAG", text[pos:end + 1], complex(0.0, val),
                                 _byte_offset(text, pos)))
                pos = end + 1
            else:
                toks.append(_Tok("NUM", m.group(), complex(val), _byte_offset(text, pos)))
                pos = end
            continue
        m = _IDENT.match(text, pos)
        if m:
            toks.append(_Tok("IDENT", m.group(), 0j, _byte_offset(text, pos)))
            pos = m.end()
            continue
        if ch in "+-*/^()":
            toks.append(_Tok("OP", ch, 0j, _byte_offset(text, pos)))
            pos += 1
            continue
        raise ExprSyntaxError(f"unexpected character {ch!r}", _byte_offset(text, pos))
    toks.append(_Tok("EOF", "", 0j, _byte_offset(text, n)))
    return toks


# -- parser -----------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, k: int = 0) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def is_op(self, chars: str, k: int = 0) -> bool:
        tok = self.peek(k)
        return tok.kind == "OP" and tok.text in chars

    def expect(self, ch: str) -> _Tok:
        tok = self.next()
        if tok.kind != "OP" or tok.text != ch:
            raise ExprSyntaxError(f"expected {ch!r}, found {tok.text or 'end of input'!r}",
                                  tok.offset)
        return tok

    def parse(self) -> Node:
        node = self.expr()
        tok = self.peek()
        if tok.kind != "EOF":
            raise ExprSyntaxError(f"unexpected {tok.text!r}", tok.offset)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.is_op("+-"):
            op = self.next().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.is_op("*/"):
            op = self.next().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self.is_op("-"):
            self.next()
            return Neg(self.unary())
        if self.is_op("+"):
            self.next()
            return self.unary()
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.is_op("^"):
            self.next()
            return Pow(base, self.exponent())
        return base

    def exponent(self) -> int:
        start = self.peek()
        paren = self.is_op("(")
        if paren:
            self.next()
        sign = 1
        if self.is_op("+-"):
            sign = -1 if self.next().text == "-" else 1
        tok = self.next()
        if tok.kind != "NUM" or not tok.value.real.is_integer():
            raise NonIntegerExponent("exponent must be an integer literal", start.offset)
        if paren:
            self.expect(")")
        return sign * int(tok.value.real)

    def complex_literal(self) -> Node | None:
        # '(' [sign] NUM sign IMAG ')'
        k = 1
        neg = False
        if self.is_op("+-", k):
            neg = self.peek(k).text == "-"
            k += 1
        if self.peek(k).kind != "NUM" or not self.is_op("+-", k + 1):
            return None
        if self.peek(k + 2).kind != "IMAG" or not self.is_op(")", k + 3):
            return None
        re_ = self.peek(k).value.real
        im = self.peek(k + 2).value.imag
        if neg:
            re_ = -re_
        if self.peek(k + 1).text == "-":
            im = -im
        self.i += k + 4
        return Num(complex(re_, im))

    def atom(self) -> Node:
        tok = self.peek()
        if tok.kind == "NUM" or tok.kind == "IMAG":
            self.next()
            return Num(tok.value)
        if tok.kind == "IDENT":
            self.next()
            name = tok.text
            if name in FUNCTIONS:
                if not self.is_op("("):
                    raise ExprSyntaxError(f"expected '(' after {name}", self.peek().offset)
                self.next()
                arg = self.expr()
                self.expect(")")
                return Call(name, arg)
            if name == "z":
                return Var()
            if name in CONSTANTS:
                return Const(name)
            raise UnknownIdentifier(f"unknown identifier {name!r}", tok.offset)
        if tok.kind == "OP" and tok.text == "(":
            lit = self.complex_literal()
            if lit is not None:
                return lit
            self.next()
            node = self.expr()
            self.expect(")")
            return node
        raise ExprSyntaxError(f"unexpected {tok.text or 'end of input'!r}", tok.offset)


# -- evaluation -------------------------------------------------------------

def _compile(node: Node, counter: list[int]) -> Callable[[complex], complex]:
    idx = counter[0]
    counter[0] += 1
    if isinstance(node, Num):
        v = node.value
        return lambda z: v
    if isinstance(node, Const):
        v = CONSTANTS[node.name]
        return lambda z: v
    if isinstance(node, Var):
        return lambda z: z
    if isinstance(node, Neg):
        f = _compile(node.arg, counter)
        return lambda z: -f(z)
    if isinstance(node, BinOp):
        f = _compile(node.left, counter)
        g = _compile(node.right, counter)
        if node.op == "+":
            return lambda z: f(z) + g(z)
        if node.op == "-":
            return lambda z: f(z) - g(z)
        if node.op == "*":
            return lambda z: f(z) * g(z)

        def div(z):
            num = f(z)
            den = g(z)
            if abs(den) < POLE_THRESHOLD:
                raise PoleError(idx, z)
            return num / den
        return div
    if isinstance(node, Pow):
        f = _compile(node.base, counter)
        n = node.exponent

        def power(z):
            b = f(z)
            if n < 0:
                if abs(b) < POLE_THRESHOLD:
                    raise PoleError(idx, z)
                return 1.0 / _ipow(b, -n)
            return _ipow(b, n)
        return power
    if isinstance(node, Call):
        f = _compile(node.arg, counter)
        fn = FUNCTIONS[node.func]

        def call(z):
            try:
                return fn(f(z))
            except OverflowError:
                raise NonFiniteValue(f"{node.func} overflows at z={z!r}") from None
        return call
    raise TypeError(f"not an expression node: {node!r}")


def _ipow(b: complex, n: int) -> complex:
    result = complex(1.0)
    while n:
        if n & 1:
            result *= b
        b *= b
        n >>= 1
    return result


def _has_var(node: Node) -> bool:
    if isinstance(node, Var):
        return True
    if isinstance(node, (Neg, Call)):
        return _has_var(node.arg)
    if isinstance(node, BinOp):
        return _has_var(node.left) or _has_var(node.right)
    if isinstance(node, Pow):
        return _has_var(node.base)
    return False


class Expression:
    """Parsed coefficient function; immutable, callable on complex points."""

    __slots__ = ("root", "text", "_fn")

    def __init__(self, root: Node, text: str | None = None):
        self.root = root
        self.text = text if text is not None else serialize(root)
        self._fn = _compile(root, [0])

    def __call__(self, z: complex) -> complex:
        value = self._fn(complex(z))
        if not cmath.isfinite(value):
            raise NonFiniteValue(f"{self.text} is not finite at z={z!r}")
        return value

    @property
    def is_constant(self) -> bool:
        return not _has_var(self.root)

    def serialize(self) -> str:
        return serialize(self.root)

    def __eq__(self, other):
        return isinstance(other, Expression) and self.root == other.root

    def __hash__(self):
        return hash(self.root)

    def __repr__(self):
        return f"Expression({self.text!r})"


def parse_expr(text: str) -> Expression:
    if not text or not text.strip():
        raise ExprSyntaxError("empty expression", 0)
    return Expression(_Parser(text).parse(), text)


def eval_expr(e: Expression, z: complex) -> complex:
    """Value of ``e`` at ``z``; raises :class:`PoleError` at a pole."""
    return e(z)


def sup_modulus_on_grid(e: Expression, grid: Iterable[complex]) -> float:
    points = list(grid)
    if not points:
        raise ValueError("grid must be non-empty")
    sup = 0.0
    for z in points:
        try:
            sup = max(sup, abs(e(z)))
        except PoleError:
            raise PoleOnGrid(z, e.text) from None
    return sup
