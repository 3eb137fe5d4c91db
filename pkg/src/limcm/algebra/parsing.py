"""Recursive-descent parser for the polynomial grammar.

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := '-' unary | power
    power  := atom ('^' INT)?
    atom   := INT | VAR | '(' expr ')'

Variables match [a-z][a-zA-Z0-9]*.  Juxtaposition ("2x", "x y") is an error.
"""
from __future__ import annotations

import re

from .ring import AlgebraError, GradedRing, Polynomial

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<var>[a-z][a-zA-Z0-9]*)|(?P<op>[-+*^()]))")


class PolynomialSyntaxError(AlgebraError):
    def __init__(self, message: str, text: str, pos: int):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos + 1}: {text!r}")


def _tokenize(text: str):
    out = []
    i = 0
    n = len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(text, i)
        if not m or m.end() == i:
            raise PolynomialSyntaxError(f"unexpected character {text[i]!r}", text, i)
        start = m.start(m.lastgroup)
        out.append((m.lastgroup, m.group(m.lastgroup), start))
        i = m.end()
    out.append(("end", "", n))
    return out


class _Parser:
    def __init__(self, text, ring):
        self.text = text
        self.ring = ring
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise PolynomialSyntaxError(msg, self.text, tok[2])

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            self.error("empty polynomial")
        f = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            if tok[0] in ("int", "var") or tok[1] == "(":
                self.error("implicit multiplication is not allowed")
            self.error(f"unexpected {tok[1]!r}")
        return f

    def expr(self):
        f = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            g = self.term()
            f = f + g if op == "+" else f - g
        return f

    def term(self):
        f = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            f = f * self.unary()
        return f

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.take()
            return -self.unary()
        if tok[0] == "op" and tok[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "int":
                self.error("exponent must be a nonnegative integer", tok)
            return base ** int(tok[1])
        return base

    def atom(self):
        tok = self.take()
        kind, val, _ = tok
        if kind == "int":
            return self.ring.constant(int(val))
        if kind == "var":
            if val not in self.ring.index:
                self.error(f"unknown variable {val!r}", tok)
            return self.ring.var(val)
        if kind == "op" and val == "(":
            f = self.expr()
            if self.peek()[1] != ")":
                self.error("expected ')'")
            self.take()
            return f
        if kind == "end":
            self.error("unexpected end of input", tok)
        self.error(f"unexpected {val!r}", tok)


def parse_polynomial(text: str, ring: GradedRing) -> Polynomial:
    """Parse ``text`` into a polynomial of ``ring`` (coefficients reduced mod p)."""
    if not isinstance(text, str):
        raise AlgebraError(f"expected a polynomial string, got {text!r}")
    return _Parser(text, ring).parse()
