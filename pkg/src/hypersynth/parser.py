"""Concrete syntax for formulas: tokenizer, recursive-descent parser, and
pretty printer.

Grammar (binding strength increases downward, U is right-associative):

    formula := ("forall" | "exists") IDENT "." formula | body
    body    := iff
    iff     := implies ("<->" implies)*          left-assoc
    implies := or ("->" implies)?                right-assoc
    or      := and ("|" and)*
    and     := until ("&" until)*
    until   := unary ("U" until)?                right-assoc
    unary   := ("!" | "X" | "F" | "G") unary | primary
    primary := "true" | "false" | IDENT "[" IDENT "]" | "(" body ")"

"false" parses to Not(true); the printer emits it back as "false", so the
round trip is stable.  "#" starts a comment that runs to end of line.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError
from .formula import (
    And,
    Atom,
    Body,
    Eventually,
    Formula,
    Globally,
    Iff,
    Implies,
    Next,
    Not,
    Or,
    Quantifier,
    Release,
    TrueBool,
    Until,
)

_KEYWORDS = {"forall", "exists", "true", "false", "U", "X", "F", "G"}
_SYMBOLS = ("<->", "->", "|", "&", "!", "(", ")", "[", "]", ".")


@dataclass(frozen=True)
class _Token:
    kind: str  # 'ident', 'kw', 'sym', 'eof'
    text: str
    pos: int
    line: int
    col: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch in " \t\r":
            i, col = i + 1, col + 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        matched = False
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                tokens.append(_Token("sym", sym, i, line, col))
                i += len(sym)
                col += len(sym)
                matched = True
                break
        if matched:
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = "kw" if word in _KEYWORDS else "ident"
            tokens.append(_Token(kind, word, i, line, col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", i, line, col)
    tokens.append(_Token("eof", "", n, line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def fail(self, message: str):
        tok = self.peek()
        raise ParseError(message, tok.pos, tok.line, tok.col)

    def expect_sym(self, sym: str) -> None:
        tok = self.peek()
        if tok.kind == "sym" and tok.text == sym:
            self.advance()
            return
        self.fail(f"expected {sym!r}")

    def at_sym(self, sym: str) -> bool:
        tok = self.peek()
        return tok.kind == "sym" and tok.text == sym

    def at_kw(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == "kw" and tok.text == word

    def formula(self) -> Formula:
        prefix: list[tuple[Quantifier, str]] = []
        while self.at_kw("forall") or self.at_kw("exists"):
            quant = (
                Quantifier.FORALL if self.advance().text == "forall" else Quantifier.EXISTS
            )
            tok = self.peek()
            if tok.kind != "ident":
                self.fail("expected trace variable name")
            self.advance()
            prefix.append((quant, tok.text))
            self.expect_sym(".")
        body = self.iff()
        tok = self.peek()
        if tok.kind != "eof":
            self.fail(f"trailing input {tok.text!r}")
        return Formula(tuple(prefix), body)

    def iff(self) -> Body:
        node = self.implies()
        while self.at_sym("<->"):
            self.advance()
            node = Iff(node, self.implies())
        return node

    def implies(self) -> Body:
        node = self.disj()
        if self.at_sym("->"):
            self.advance()
            return Implies(node, self.implies())
        return node

    def disj(self) -> Body:
        node = self.conj()
        while self.at_sym("|"):
            self.advance()
            node = Or(node, self.conj())
        return node

    def conj(self) -> Body:
        node = self.until()
        while self.at_sym("&"):
            self.advance()
            node = And(node, self.until())
        return node

    def until(self) -> Body:
        node = self.unary()
        if self.at_kw("U"):
            self.advance()
            return Until(node, self.until())
        return node

    def unary(self) -> Body:
        if self.at_sym("!"):
            self.advance()
            return Not(self.unary())
        for word, ctor in (("X", Next), ("F", Eventually), ("G", Globally)):
            if self.at_kw(word):
                self.advance()
                return ctor(self.unary())
        return self.primary()

    def primary(self) -> Body:
        tok = self.peek()
        if self.at_kw("true"):
            self.advance()
            return TrueBool()
        if self.at_kw("false"):
            self.advance()
            return Not(TrueBool())
        if self.at_sym("("):
            self.advance()
            node = self.iff()
            self.expect_sym(")")
            return node
        if tok.kind == "ident":
            self.advance()
            self.expect_sym("[")
            var = self.peek()
            if var.kind != "ident":
                self.fail("expected trace variable inside [ ]")
            self.advance()
            self.expect_sym("]")
            return Atom(tok.text, var.text)
        self.fail(f"unexpected token {tok.text!r}")


def parse(text: str) -> Formula:
    """Parse a closed formula; raises ParseError, UnboundVariable, or
    DuplicateQuantifier."""
    return _Parser(_tokenize(text)).formula()


def parse_body(text: str) -> Body:
    """Parse a bare body (no quantifier prefix, free variables allowed)."""
    parser = _Parser(_tokenize(text))
    node = parser.iff()
    tok = parser.peek()
    if tok.kind != "eof":
        parser.fail(f"trailing input {tok.text!r}")
    return node


# --- printing --------------------------------------------------------------

# binding strength; parent prints parens around a child of looser level
_LEVEL_IFF, _LEVEL_IMPLIES, _LEVEL_OR, _LEVEL_AND, _LEVEL_UNTIL, _LEVEL_UNARY = range(6)


def _level(body: Body) -> int:
    if isinstance(body, Iff):
        return _LEVEL_IFF
    if isinstance(body, Implies):
        return _LEVEL_IMPLIES
    if isinstance(body, Or):
        return _LEVEL_OR
    if isinstance(body, And):
        return _LEVEL_AND
    if isinstance(body, (Until, Release)):
        return _LEVEL_UNTIL
    return _LEVEL_UNARY


def _print_at(body: Body, min_level: int) -> str:
    text = _print(body)
    if _level(body) < min_level:
        return f"({text})"
    return text


def _print(body: Body) -> str:
    if isinstance(body, TrueBool):
        return "true"
    if isinstance(body, Not):
        if isinstance(body.operand, TrueBool):
            return "false"
        return "!" + _print_at(body.operand, _LEVEL_UNARY)
    if isinstance(body, Atom):
        return f"{body.prop}[{body.var}]"
    if isinstance(body, Iff):
        # left-assoc chain: right child needs parens at equal level
        return f"{_print_at(body.left, _LEVEL_IFF)} <-> {_print_at(body.right, _LEVEL_IFF + 1)}"
    if isinstance(body, Implies):
        return f"{_print_at(body.left, _LEVEL_IMPLIES + 1)} -> {_print_at(body.right, _LEVEL_IMPLIES)}"
    if isinstance(body, Or):
        return f"{_print_at(body.left, _LEVEL_OR)} | {_print_at(body.right, _LEVEL_OR + 1)}"
    if isinstance(body, And):
        return f"{_print_at(body.left, _LEVEL_AND)} & {_print_at(body.right, _LEVEL_AND + 1)}"
    if isinstance(body, Until):
        return f"{_print_at(body.left, _LEVEL_UNTIL + 1)} U {_print_at(body.right, _LEVEL_UNTIL)}"
    if isinstance(body, Release):
        # internal node: print through its until definition
        return _print(Not(Until(Not(body.left), Not(body.right))))
    if isinstance(body, Next):
        return "X " + _print_at(body.operand, _LEVEL_UNARY)
    if isinstance(body, Eventually):
        return "F " + _print_at(body.operand, _LEVEL_UNARY)
    if isinstance(body, Globally):
        return "G " + _print_at(body.operand, _LEVEL_UNARY)
    raise TypeError(f"unknown body node {body!r}")


def print_body(body: Body) -> str:
    return _print(body)


def print_formula(f: Formula) -> str:
    parts = [f"{q.value} {name}." for q, name in f.prefix]
    parts.append(_print(f.body))
    return " ".join(parts)
