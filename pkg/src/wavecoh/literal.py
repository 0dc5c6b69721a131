"""Parser for rational-function literals such as ``(x^2 - 1)/p^2``.

Grammar (no implicit multiplication)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" INTEGER)?
    atom   := INTEGER | "x" | "p" | "(" expr ")"

``p`` stands for the wave polynomial of the selected eigenpair and is kept
symbolic (as powers of ``p``) until :meth:`RationalLiteral.expand`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .poly import Polynomial

__all__ = ["LiteralSyntaxError", "RationalLiteral", "parse_rational"]

_TOKEN = re.compile(r"\s*(?:(\d+)|([xp])|(\^)|([-+*/()]))")


class LiteralSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class RationalLiteral:
    """``sum_k terms[k] * p**k / denominator`` with integer (possibly negative) ``k``."""

    terms: tuple  # ((k, Polynomial), ...) sorted by k
    denominator: Polynomial

    @classmethod
    def make(cls, terms: dict, den: Polynomial) -> "RationalLiteral":
        clean = tuple(sorted((k, v) for k, v in terms.items() if not v.is_zero))
        return cls(clean, den)

    def __add__(self, other):
        out: dict = {}
        for k, v in self.terms:
            out[k] = out.get(k, Polynomial()) + v * other.denominator
        for k, v in other.terms:
            out[k] = out.get(k, Polynomial()) + v * self.denominator
        return RationalLiteral.make(out, self.denominator * other.denominator)

    def __neg__(self):
        return RationalLiteral(tuple((k, -v) for k, v in self.terms), self.denominator)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out: dict = {}
        for k1, v1 in self.terms:
            for k2, v2 in other.terms:
                out[k1 + k2] = out.get(k1 + k2, Polynomial()) + v1 * v2
        return RationalLiteral.make(out, self.denominator * other.denominator)

    def __truediv__(self, other):
        if not other.terms:
            raise LiteralSyntaxError("division by zero")
        if len(other.terms) > 1:
            raise LiteralSyntaxError("cannot divide by a sum involving p")
        (k, v), = other.terms
        out = {j - k: w * other.denominator for j, w in self.terms}
        return RationalLiteral.make(out, self.denominator * v)

    def __pow__(self, e: int):
        out = RationalLiteral(((0, Polynomial((1,))),), Polynomial((1,)))
        for _ in range(e):
            out = out * self
        return out

    @property
    def uses_p(self) -> bool:
        return any(k != 0 for k, _ in self.terms)

    def expand(self, p: Polynomial | None) -> tuple[Polynomial, Polynomial, int]:
        """Substitute ``p``; returns ``(numerator, denominator, m)`` meaning
        ``numerator / (denominator * p**m)`` with ``m >= 0``."""
        if self.uses_p and p is None:
            raise LiteralSyntaxError("literal uses p but no wave polynomial is selected")
        m = max(0, -min((k for k, _ in self.terms), default=0))
        num = Polynomial()
        for k, v in self.terms:
            num = num + (v * p ** (k + m) if k + m else v)
        return num, self.denominator, m


def _tokenize(text: str) -> list:
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise LiteralSyntaxError(f"unexpected character {text[pos]!r} at position {pos}")
        num, var, caret, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif var is not None:
            out.append(("var", var))
        else:
            out.append(("op", caret or op))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind or "token"
            raise LiteralSyntaxError(f"expected {want} at token {self.i}, got {tok[1]!r}")
        self.i += 1
        return tok

    def expr(self):
        val = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.unary()
            val = val * rhs if op == "*" else val / rhs
        return val

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            return base ** self.take("num")[1]
        return base

    def atom(self):
        kind, val = self.peek()
        one = Polynomial((1,))
        if kind == "num":
            self.take()
            return RationalLiteral.make({0: Polynomial((Fraction(val),))}, one)
        if kind == "var":
            self.take()
            if val == "x":
                return RationalLiteral.make({0: Polynomial((0, 1))}, one)
            return RationalLiteral.make({1: one}, one)
        if (kind, val) == ("op", "("):
            self.take()
            inner = self.expr()
            self.take("op", ")")
            return inner
        raise LiteralSyntaxError(f"unexpected token {val!r}")


def parse_rational(text: str) -> RationalLiteral:
    """Parse a rational-function literal; raises :class:`LiteralSyntaxError`."""
    toks = _tokenize(text)
    if not toks:
        raise LiteralSyntaxError("empty literal")
    parser = _Parser(toks)
    val = parser.expr()
    if parser.i != len(toks):
        raise LiteralSyntaxError(f"unexpected trailing token {parser.peek()[1]!r} (implicit "
                                 "multiplication is not allowed)")
    return val
