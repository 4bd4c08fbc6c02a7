"""Pattern language: event types composed with sequence, disjunction, iteration.

Concrete syntax: ``;`` sequences, ``|`` chooses, postfix ``*`` iterates,
parentheses group, whitespace is ignored. ``*`` binds tighter than ``;``,
which binds tighter than ``|``; ``;`` and ``|`` associate to the left.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .errors import PatternSyntaxError
from .events import Alphabet

PatternExpr = Union["Sym", "Seq", "Or", "Iter"]


@dataclass(frozen=True, slots=True)
class Sym:
    name: str


@dataclass(frozen=True, slots=True)
class Seq:
    left: PatternExpr
    right: PatternExpr


@dataclass(frozen=True, slots=True)
class Or:
    left: PatternExpr
    right: PatternExpr


@dataclass(frozen=True, slots=True)
class Iter:
    body: PatternExpr


_TOKEN_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*|[;|*()]")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise PatternSyntaxError(f"unexpected character {text[pos]!r}", pos)
        tokens.append((m.group(), pos))
        pos = m.end()
    return tokens


class _Parser:
    """Recursive descent over: expr := term ('|' term)*, term := factor (';' factor)*,
    factor := base '*'*, base := IDENT | '(' expr ')'."""

    def __init__(self, text: str, alphabet: Alphabet):
        self.text = text
        self.alphabet = alphabet
        self.tokens = _tokenize(text)
        self.at = 0

    def _peek(self):
        return self.tokens[self.at][0] if self.at < len(self.tokens) else None

    def _pos(self):
        return self.tokens[self.at][1] if self.at < len(self.tokens) else len(self.text)

    def parse(self) -> PatternExpr:
        expr = self._expr()
        if self.at < len(self.tokens):
            raise PatternSyntaxError(f"unexpected token {self._peek()!r}", self._pos())
        return expr

    def _expr(self):
        node = self._term()
        while self._peek() == "|":
            self.at += 1
            node = Or(node, self._term())
        return node

    def _term(self):
        node = self._factor()
        while self._peek() == ";":
            self.at += 1
            node = Seq(node, self._factor())
        return node

    def _factor(self):
        node = self._base()
        while self._peek() == "*":
            self.at += 1
            node = Iter(node)
        return node

    def _base(self):
        tok = self._peek()
        pos = self._pos()
        if tok == "(":
            self.at += 1
            node = self._expr()
            if self._peek() != ")":
                raise PatternSyntaxError("expected ')'", self._pos())
            self.at += 1
            return node
        if tok is None or tok in ";|*)":
            raise PatternSyntaxError("expected event type or '('", pos)
        if tok not in self.alphabet:
            raise PatternSyntaxError(f"unknown event type {tok!r}", pos)
        self.at += 1
        return Sym(tok)


def parse_pattern(text: str, alphabet: Alphabet) -> PatternExpr:
    """Parse pattern text; every named symbol must be in the alphabet."""
    if not text.strip():
        raise PatternSyntaxError("empty pattern", 0)
    return _Parser(text, alphabet).parse()


# Binding strength per node kind; children weaker than their slot get parens.
_LEVEL = {Or: 0, Seq: 1, Iter: 2, Sym: 3}


def _fmt(expr: PatternExpr, min_level: int) -> str:
    if isinstance(expr, Sym):
        return expr.name
    if isinstance(expr, Iter):
        out = _fmt(expr.body, 2) + "*"
    elif isinstance(expr, Seq):
        out = _fmt(expr.left, 1) + ";" + _fmt(expr.right, 2)
    else:
        out = _fmt(expr.left, 0) + "|" + _fmt(expr.right, 1)
    if _LEVEL[type(expr)] < min_level:
        return "(" + out + ")"
    return out


def format_pattern(expr: PatternExpr) -> str:
    """Render an AST back to text; parse_pattern(format_pattern(e)) == e."""
    return _fmt(expr, 0)


def matches_epsilon(expr: PatternExpr) -> bool:
    """True iff the empty sequence is in the pattern's language."""
    if isinstance(expr, Sym):
        return False
    if isinstance(expr, Seq):
        return matches_epsilon(expr.left) and matches_epsilon(expr.right)
    if isinstance(expr, Or):
        return matches_epsilon(expr.left) or matches_epsilon(expr.right)
    return True  # Iter
