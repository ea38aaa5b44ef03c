"""Recursive-descent parser for rational expressions in named symbols.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' INT)?
    atom   := INT | SYMBOL | '(' expr ')'
"""
from __future__ import annotations

import re

from .polynomial import Polynomial
from .rational import PoleError, RationalFunction

_TOKEN_RE = re.compile(r"(\d+)|([a-zA-Z][a-zA-Z0-9_]*)|(.)", re.DOTALL)


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        offset = len(text[:pos].encode())
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), offset))
        elif m.group(2) is not None:
            tokens.append(("sym", m.group(2), offset))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ExprSyntaxError(f"unexpected character {ch!r}", offset)
            tokens.append((ch, ch, offset))
        pos = m.end()
    tokens.append(("end", "", len(text.encode())))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            found = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ExprSyntaxError(f"expected {kind!r}, found {found}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> RationalFunction:
        value = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ExprSyntaxError(f"unexpected {tok[1]!r}", tok[2])
        return value

    def expr(self):
        value = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek()[0] in ("*", "/"):
            op, _, offset = self.take()
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    raise PoleError(f"division by zero at offset {offset}")
                value = value / rhs
        return value

    def unary(self):
        if self.peek()[0] == "-":
            self.take()
            return -self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.peek()
            if tok[0] != "int":
                raise ExprSyntaxError("exponent must be a non-negative integer literal", tok[2])
            self.take()
            base = base ** int(tok[1])
            if self.peek()[0] == "^":
                raise ExprSyntaxError("chained exponents need parentheses", self.peek()[2])
        return base

    def atom(self):
        kind, text, offset = self.peek()
        if kind == "int":
            self.take()
            return RationalFunction(int(text))
        if kind == "sym":
            self.take()
            return RationalFunction.symbol(text)
        if kind == "(":
            self.take()
            value = self.expr()
            self.take(")")
            return value
        found = "end of input" if kind == "end" else repr(text)
        raise ExprSyntaxError(f"unexpected {found}", offset)


def expr_parse(text: str) -> RationalFunction:
    """Parse ``text`` into a canonical :class:`RationalFunction`.

    >>> expr_parse("1/(d*k)").to_text()
    '1/(d*k)'
    """
    return _Parser(text).parse()


def parse_polynomial(text: str) -> Polynomial:
    """Parse an expression that must reduce to a polynomial (dimension specs)."""
    r = expr_parse(text)
    if not r.is_polynomial():
        raise ValueError(f"{text!r} is not a polynomial")
    return r.num
