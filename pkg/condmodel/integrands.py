"""Cost expressions for the conditional minimum.

Grammar::

    expr   := sum
    sum    := prod (("+" | "-") prod)*
    prod   := unary (("*" | "/") unary)*
    unary  := "-" unary | power
    power  := atom ("^" INT)?
    atom   := NUMBER | "x" | "x" INT | FUNC "(" expr ("," expr)* ")" | "(" expr ")"

``NUMBER`` is an integer or decimal literal, read exactly. ``x`` is the first
coordinate, ``x1 .. xn`` are coordinates counted from 1. ``FUNC`` is ``min``,
``max`` or ``abs``.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Sequence, Tuple, Union

from .errors import FormulaSyntaxError


@dataclass(frozen=True)
class Const:
    value: Fraction


@dataclass(frozen=True)
class Coord:
    index: int


@dataclass(frozen=True)
class Neg:
    body: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Power:
    base: "Expr"
    exponent: int


@dataclass(frozen=True)
class Call:
    func: str
    args: Tuple["Expr", ...]


Expr = Union[Const, Coord, Neg, BinOp, Power, Call]

_FUNCS: Dict[str, Callable] = {
    "min": lambda *xs: min(xs),
    "max": lambda *xs: max(xs),
    "abs": lambda x: abs(x),
}

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<name>[a-z]+\d*)|(?P<op>[-+*/^(),]))"
)


def _tokens(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        if not match:
            bad = len(text) - len(text[pos:].lstrip())
            raise FormulaSyntaxError(f"unexpected character {text[bad]!r}", bad + 1)
        kind = match.lastgroup
        start = match.start(kind)
        tokens.append((kind, match.group(kind), start + 1))
        pos = match.end()
    tokens.append(("eof", "", len(text) + 1))
    return tokens


class _ExprParser:
    def __init__(self, text: str):
        self.tokens = _tokens(text)
        self.pos = 0

    @property
    def current(self) -> Tuple[str, str, int]:
        return self.tokens[self.pos]

    def accept(self, value: str) -> bool:
        if self.current[0] == "op" and self.current[1] == value:
            self.pos += 1
            return True
        return False

    def expect(self, value: str) -> None:
        if not self.accept(value):
            kind, text, col = self.current
            raise FormulaSyntaxError(f"expected {value!r}, found {text or 'end of input'!r}", col)

    def parse(self) -> Expr:
        expr = self.sum()
        kind, text, col = self.current
        if kind != "eof":
            raise FormulaSyntaxError(f"unexpected {text!r}", col)
        return expr

    def sum(self) -> Expr:
        expr = self.prod()
        while self.current[0] == "op" and self.current[1] in "+-":
            op = self.current[1]
            self.pos += 1
            expr = BinOp(op, expr, self.prod())
        return expr

    def prod(self) -> Expr:
        expr = self.unary()
        while self.current[0] == "op" and self.current[1] in "*/":
            op = self.current[1]
            self.pos += 1
            expr = BinOp(op, expr, self.unary())
        return expr

    def unary(self) -> Expr:
        if self.accept("-"):
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.accept("^"):
            kind, text, col = self.current
            if kind != "num" or "." in text:
                raise FormulaSyntaxError("exponent must be a natural number", col)
            self.pos += 1
            return Power(base, int(text))
        return base

    def atom(self) -> Expr:
        kind, text, col = self.current
        if kind == "num":
            self.pos += 1
            return Const(Fraction(text))
        if kind == "name":
            self.pos += 1
            if text in _FUNCS:
                self.expect("(")
                args = [self.sum()]
                while self.accept(","):
                    args.append(self.sum())
                self.expect(")")
                if text == "abs" and len(args) != 1:
                    raise FormulaSyntaxError("abs takes one argument", col)
                return Call(text, tuple(args))
            match = re.fullmatch(r"x(\d*)", text)
            if not match:
                raise FormulaSyntaxError(f"unknown name {text!r}", col)
            index = int(match.group(1) or 1)
            if index < 1:
                raise FormulaSyntaxError("coordinates are numbered from 1", col)
            return Coord(index - 1)
        if self.accept("("):
            expr = self.sum()
            self.expect(")")
            return expr
        raise FormulaSyntaxError(f"unexpected {text or 'end of input'!r}", col)


def parse_expr(text: str) -> Expr:
    """Parse a cost expression.

    Raises:
        FormulaSyntaxError: With the 1-based column of the offending token.
    """
    return _ExprParser(text).parse()


def evaluate(expr: Expr, point: Sequence[Fraction]) -> Fraction:
    """Exact value of ``expr`` at ``point``.

    Raises:
        ZeroDivisionError: If a denominator vanishes.
        IndexError: If a coordinate is beyond the point's dimension.
    """
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Coord):
        return Fraction(point[expr.index])
    if isinstance(expr, Neg):
        return -evaluate(expr.body, point)
    if isinstance(expr, Power):
        return evaluate(expr.base, point) ** expr.exponent
    if isinstance(expr, Call):
        return _FUNCS[expr.func](*(evaluate(arg, point) for arg in expr.args))
    left, right = evaluate(expr.left, point), evaluate(expr.right, point)
    if expr.op == "+":
        return left + right
    if expr.op == "-":
        return left - right
    if expr.op == "*":
        return left * right
    return left / right


def dimension(expr: Expr) -> int:
    """The number of coordinates ``expr`` reads (the highest index used)."""
    if isinstance(expr, Coord):
        return expr.index + 1
    if isinstance(expr, Neg):
        return dimension(expr.body)
    if isinstance(expr, Power):
        return dimension(expr.base)
    if isinstance(expr, BinOp):
        return max(dimension(expr.left), dimension(expr.right))
    if isinstance(expr, Call):
        return max(dimension(arg) for arg in expr.args)
    return 0


def format_expr(expr: Expr) -> str:
    if isinstance(expr, Const):
        return str(expr.value) if expr.value.denominator == 1 else f"({expr.value})"
    if isinstance(expr, Coord):
        return f"x{expr.index + 1}"
    if isinstance(expr, Neg):
        return f"-({format_expr(expr.body)})"
    if isinstance(expr, Power):
        return f"({format_expr(expr.base)})^{expr.exponent}"
    if isinstance(expr, Call):
        return f"{expr.func}(" + ", ".join(format_expr(a) for a in expr.args) + ")"
    return f"({format_expr(expr.left)} {expr.op} {format_expr(expr.right)})"
