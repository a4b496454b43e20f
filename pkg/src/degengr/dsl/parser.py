"""Recursive-descent parser for the expression grammar.

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := "-" unary | power
    power  := atom ("^" unary)?
    atom   := NUMBER | NAME | FUNC "(" expr ")" | "(" expr ")"

``^`` is right-associative and binds tighter than unary minus, so
``-x^2`` is ``-(x^2)`` and ``2^-x`` is legal. There is no implicit
multiplication.
"""
from __future__ import annotations

import re
from typing import Iterable, NamedTuple

from ..errors import ExprSyntaxError
from .expr import FUNCTIONS, BinOp, Const, Expr, Func, Neg, Param, Var

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


class Token(NamedTuple):
    kind: str
    text: str
    offset: int  # byte offset into the UTF-8 encoding


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExprSyntaxError(
                f"unexpected character {text[pos]!r}",
                _byte_offset(text, pos),
                "a number, name, operator or parenthesis",
                text,
            )
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), _byte_offset(text, pos)))
        pos = m.end()
    tokens.append(Token("eof", "", _byte_offset(text, len(text))))
    return tokens


class _Parser:
    def __init__(self, text: str, params: frozenset[str]):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.params = params

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def fail(self, expected: str):
        tok = self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ExprSyntaxError(f"unexpected {found}", tok.offset, expected, self.text)

    def accept(self, op: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == op:
            self.i += 1
            return True
        return False

    def expect(self, op: str):
        if not self.accept(op):
            self.fail(repr(op))

    def parse(self) -> Expr:
        node = self.expr()
        if self.tok.kind != "eof":
            self.fail("an operator or end of input")
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Expr:
        if self.accept("-"):
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.accept("^"):
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "number":
            self.i += 1
            return Const(float(tok.text))
        if tok.kind == "name":
            self.i += 1
            if tok.text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Func(tok.text, arg)
            if self.tok.kind == "op" and self.tok.text == "(":
                raise ExprSyntaxError(
                    f"unknown function {tok.text!r}",
                    tok.offset,
                    "one of " + ", ".join(FUNCTIONS),
                    self.text,
                )
            if tok.text in self.params:
                return Param(tok.text)
            return Var(tok.text)
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        self.fail("a number, name, function call or '('")


def parse_expression(text: str, params: Iterable[str] = ()) -> Expr:
    """Parse ``text`` into an expression tree.

    Names listed in ``params`` become parameter nodes; every other bare
    name becomes a coordinate variable.

    >>> from degengr.dsl import to_text
    >>> to_text(parse_expression("1 - 2*m/r"))
    '1 - 2 * m / r'
    """
    return _Parser(text, frozenset(params)).parse()
