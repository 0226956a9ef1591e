"""Parser for the word grammar.

::

    word   := factor { ['*'] factor }
    factor := atom [ '^' integer ]
    atom   := 'x' nat | '[' word ',' word ']' | '(' word ')' | 'e'

Whitespace is ignored.  ``[a,b]`` means ``a^-1 b^-1 a b``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .errors import RankMismatchError, WordSyntaxError
from .free import FreeWord, _free_reduce


@dataclass(frozen=True)
class Gen:
    index: int


@dataclass(frozen=True)
class Identity:
    pass


@dataclass(frozen=True)
class Power:
    base: "WordExpr"
    exponent: int


@dataclass(frozen=True)
class Product:
    factors: tuple


@dataclass(frozen=True)
class Commutator:
    left: "WordExpr"
    right: "WordExpr"


WordExpr = Union[Gen, Identity, Power, Product, Commutator]


class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def error(self, msg):
        raise WordSyntaxError(msg, self.text, self.pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def integer(self, signed):
        self.skip()
        start = self.pos
        if signed and self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        digits = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits:
            self.pos = start
            self.error("expected integer")
        return int(self.text[start : self.pos])

    def word(self):
        factors = [self.factor()]
        while True:
            c = self.peek()
            if c == "*":
                self.pos += 1
                factors.append(self.factor())
            elif c and c in "x[(e":
                factors.append(self.factor())
            else:
                break
        return factors[0] if len(factors) == 1 else Product(tuple(factors))

    def factor(self):
        atom = self.atom()
        if self.peek() == "^":
            self.pos += 1
            atom = Power(atom, self.integer(signed=True))
        return atom

    def atom(self):
        c = self.peek()
        if c == "x":
            self.pos += 1
            if self.pos >= len(self.text) or not self.text[self.pos].isdigit():
                self.error("expected generator index after 'x'")
            i = self.integer(signed=False)
            if i < 1:
                self.error("generator indices start at 1")
            return Gen(i)
        if c == "e":
            self.pos += 1
            return Identity()
        if c == "(":
            self.pos += 1
            inner = self.word()
            self.expect(")")
            return inner
        if c == "[":
            self.pos += 1
            left = self.word()
            self.expect(",")
            right = self.word()
            self.expect("]")
            return Commutator(left, right)
        self.error("unexpected end of input" if not c else f"unexpected character {c!r}")


def parse_word(text: str) -> WordExpr:
    p = _Parser(text)
    expr = p.word()
    if p.peek():
        p.error(f"unexpected character {p.peek()!r}")
    return expr


def max_generator(expr: WordExpr) -> int:
    if isinstance(expr, Gen):
        return expr.index
    if isinstance(expr, Identity):
        return 0
    if isinstance(expr, Power):
        return max_generator(expr.base)
    if isinstance(expr, Commutator):
        return max(max_generator(expr.left), max_generator(expr.right))
    return max(max_generator(f) for f in expr.factors)


def _letters(expr):
    if isinstance(expr, Gen):
        return [expr.index]
    if isinstance(expr, Identity):
        return []
    if isinstance(expr, Power):
        base = list(_free_reduce(_letters(expr.base)))
        if expr.exponent < 0:
            base = [-a for a in reversed(base)]
        return base * abs(expr.exponent)
    if isinstance(expr, Commutator):
        a = _letters(expr.left)
        b = _letters(expr.right)
        return [-x for x in reversed(a)] + [-x for x in reversed(b)] + a + b
    out = []
    for f in expr.factors:
        out.extend(_letters(f))
    return out


def flatten(expr: WordExpr, rank: int | None = None) -> FreeWord:
    """Expand and freely reduce; ``rank`` defaults to the largest index used (at least 1)."""
    used = max_generator(expr)
    if rank is None:
        rank = max(used, 1)
    elif used > rank:
        raise RankMismatchError(f"word uses x{used} but rank is {rank}")
    return FreeWord(rank, _free_reduce(_letters(expr)))
