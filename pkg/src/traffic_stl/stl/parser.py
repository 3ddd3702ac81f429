"""Recursive-descent parser for the formula DSL.

Grammar, loosest binding first::

    formula  := disj ('=>' formula)?            # right-associative
    disj     := conj ('or' conj)*
    conj     := unary ('and' unary)*
    unary    := 'not' unary
              | 'always' interval? unary
              | 'eventually' interval? unary
              | '(' formula ('until' interval? formula)? ')'
              | atom
    interval := '[' number ',' (number | 'end') ']'
    atom     := ident cmp number ('unless' ident cmp number)?
    cmp      := '>' | '>=' | '<' | '<='

Channel names are not checked here; they are resolved against a trace when
the formula is evaluated.
"""

from __future__ import annotations

import re
from typing import NamedTuple

from ..exceptions import ParameterError, ParseError
from .ast import (
    FULL,
    Always,
    And,
    Atom,
    Eventually,
    Formula,
    Implies,
    Interval,
    Mask,
    Not,
    Or,
    Predicate,
    Until,
)

KEYWORDS = frozenset({"not", "and", "or", "always", "eventually", "until", "end", "unless"})

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>[-+]?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][-+]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_.]*)
  | (?P<op>=>|>=|<=|>|<|\(|\)|\[|\]|,)
    """,
    re.VERBOSE,
)


class Token(NamedTuple):
    kind: str  # number | ident | keyword | op | eof
    text: str
    pos: int  # 1-based


def tokenize(text: str) -> list[Token]:
    tokens = []
    i = 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if m is None:
            raise ParseError(f"unexpected character {text[i]!r}", i + 1, text)
        kind = m.lastgroup
        if kind != "ws":
            word = m.group()
            if kind == "ident" and word in KEYWORDS:
                kind = "keyword"
            tokens.append(Token(kind, word, i + 1))
        i = m.end()
    tokens.append(Token("eof", "", len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ParseError(f"{message}, found {found}", tok.pos, self.text)

    def accept(self, text) -> bool:
        if self.tok.text == text and self.tok.kind in ("op", "keyword"):
            self.i += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            self.error(f"expected {text!r}")

    # productions

    def formula(self) -> Formula:
        left = self.disj()
        if self.accept("=>"):
            return Implies(left, self.formula())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.accept("or"):
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.accept("and"):
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.tok
        if self.accept("not"):
            return Not(self.unary())
        if self.accept("always"):
            interval = self.maybe_interval()
            return Always(self.unary(), interval)
        if self.accept("eventually"):
            interval = self.maybe_interval()
            return Eventually(self.unary(), interval)
        if self.accept("("):
            inner = self.formula()
            if self.accept("until"):
                interval = self.maybe_interval()
                right = self.formula()
                inner = Until(inner, right, interval)
            self.expect(")")
            return inner
        if tok.kind == "ident":
            return self.atom()
        self.error("expected a formula")

    def maybe_interval(self) -> Interval:
        if self.tok.text != "[":
            return FULL
        open_tok = self.advance()
        lo = self.number()
        self.expect(",")
        if self.accept("end"):
            hi = None
        else:
            hi = self.number()
        self.expect("]")
        try:
            return Interval(lo, hi)
        except ParameterError as exc:
            raise ParseError(str(exc), open_tok.pos, self.text) from None

    def number(self) -> float:
        if self.tok.kind != "number":
            self.error("expected a number")
        return float(self.advance().text)

    def comparison(self):
        name_tok = self.advance()
        op_tok = self.tok
        if op_tok.kind != "op" or op_tok.text not in (">", ">=", "<", "<="):
            self.error(f"expected a comparison after {name_tok.text!r}")
        self.advance()
        if self.tok.kind != "number":
            found = "end of input" if self.tok.kind == "eof" else repr(self.tok.text)
            raise ParseError(
                f"comparison {op_tok.text!r} has no number on its right, found {found}",
                op_tok.pos,
                self.text,
            )
        return name_tok.text, op_tok.text, self.number()

    def atom(self) -> Atom:
        channel, op, threshold = self.comparison()
        mask = None
        if self.accept("unless"):
            if self.tok.kind != "ident":
                self.error("expected a channel name after 'unless'")
            mask = Mask(*self.comparison())
        return Atom(Predicate(channel, op, threshold, mask))


def parse(text: str) -> Formula:
    """Parse DSL ``text`` into a :class:`Formula`.

    >>> parse("always (speed <= 31)")
    Always[0,end](Atom(speed <= 31))
    """
    if not text or not text.strip():
        raise ParseError("empty formula", 1, text)
    p = _Parser(text)
    f = p.formula()
    if p.tok.kind != "eof":
        p.error("unexpected trailing input")
    return f
