"""Recursive-descent parser for rational-function expressions.

Grammar (whitespace insignificant)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := ('+'|'-') factor | power
    power  := atom ['^' exponent]
    atom   := INTEGER | VAR | '(' expr ')'
    exponent := INTEGER | '(' INTEGER ')'

Exponents are non-negative integer literals; ``z^2^3`` is rejected.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError
from .exact import Polynomial, RationalFunction

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\S))")


@dataclass(frozen=True)
class MapExpression:
    source: str
    parsed: RationalFunction


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastindex) if m.lastindex else m.end()
        if m.group(1):
            tokens.append(("int", m.group(1), start))
        elif m.group(2):
            tokens.append(("name", m.group(2), start))
        elif m.group(3):
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", start)
            tokens.append(("op", ch, start))
        pos = m.end()
    tokens.append(("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str, variables: tuple[str, ...]):
        self.src = src
        self.tokens = _tokenize(src)
        self.i = 0
        self.variables = variables
        self.seen_var: str | None = None

    @property
    def tok(self):
        return self.tokens[self.i]

    def accept(self, op: str) -> bool:
        kind, text, _ = self.tok
        if kind == "op" and text == op:
            self.i += 1
            return True
        return False

    def expect(self, op: str):
        if not self.accept(op):
            self.fail(f"'{op}'")

    def fail(self, expected: str):
        kind, text, pos = self.tok
        found = "end of input" if kind == "end" else repr(text)
        raise ParseError(f"unexpected {found}", pos, expected)

    def parse(self) -> RationalFunction:
        value = self.expr()
        if self.tok[0] != "end":
            self.fail("operator or end of input")
        return value

    def expr(self) -> RationalFunction:
        value = self.term()
        while True:
            if self.accept("+"):
                value = value + self.term()
            elif self.accept("-"):
                value = value - self.term()
            else:
                return value

    def term(self) -> RationalFunction:
        value = self.factor()
        while True:
            if self.accept("*"):
                value = value * self.factor()
            elif self.accept("/"):
                pos = self.tok[2]
                divisor = self.factor()
                if divisor.is_zero():
                    raise ParseError("division by the zero polynomial", pos)
                value = value / divisor
            else:
                return value

    def factor(self) -> RationalFunction:
        if self.accept("-"):
            return -self.factor()
        if self.accept("+"):
            return self.factor()
        return self.power()

    def power(self) -> RationalFunction:
        base = self.atom()
        if self.accept("^"):
            e = self.exponent()
            if self.tok[0] == "op" and self.tok[1] == "^":
                raise ParseError("exponent applied to a non-atom; add parentheses", self.tok[2])
            return base ** e
        return base

    def exponent(self) -> int:
        kind, text, _ = self.tok
        if kind == "int":
            self.i += 1
            return int(text)
        if self.accept("("):
            kind, text, _ = self.tok
            if kind != "int":
                self.fail("non-negative integer exponent")
            self.i += 1
            self.expect(")")
            return int(text)
        self.fail("non-negative integer exponent")

    def atom(self) -> RationalFunction:
        kind, text, pos = self.tok
        if kind == "int":
            self.i += 1
            return RationalFunction.from_poly(Fraction(int(text)))
        if kind == "name":
            if text not in self.variables:
                raise ParseError(f"unknown variable {text!r}", pos, " or ".join(self.variables))
            if self.seen_var is not None and text != self.seen_var:
                raise ParseError(f"mixed variables {self.seen_var!r} and {text!r}", pos)
            self.seen_var = text
            self.i += 1
            return RationalFunction.from_poly(Polynomial.x())
        if self.accept("("):
            value = self.expr()
            self.expect(")")
            return value
        self.fail("number, variable or '('")


def parse_expression(src: str, variables: tuple[str, ...] = ("z", "x")) -> RationalFunction:
    """Parse ``src`` into a normalized rational function in one variable."""
    return _Parser(src, variables).parse()


def parse_map(src: str) -> MapExpression:
    return MapExpression(src, parse_expression(src))
