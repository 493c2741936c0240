"""Recursive-descent parser for operator expressions over (y, p).

Grammar::

    expr   := ['-'] term (('+' | '-') term)*
    term   := factor (('*' factor) | ('/' number))*
    factor := atom ('^' integer)?
    atom   := number | identifier | '(' expr ')'

Juxtaposition is not multiplication.  Division is only by a numeric literal,
which is how rational constants such as ``1/2`` or ``m*lambda/2`` are
written.  Identifiers are ``y``, ``p``, ``i``, ``hbar``, ``m``, ``omega`` and
``lambda``; the last four are replaced by exact rationals before evaluation,
and every product is normal ordered as it is formed.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .weyl_algebra import I, OperatorPoly, SymbolicParams, generators

IDENTIFIERS = ("y", "p", "i", "hbar", "m", "omega", "lambda")

_TOKEN = re.compile(
    r"\s*(?:(?P<number>\d+(?:\.\d*)?|\.\d+)|(?P<ident>[A-Za-z_]\w*)|(?P<op>==|[-+*/^()]))"
)


class ParseError(ValueError):
    """Malformed expression; ``offset`` is a byte offset into the UTF-8 source."""

    def __init__(self, message: str, offset: int, expected=()):
        self.offset = offset
        self.expected = tuple(sorted(expected))
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} at byte {offset}{detail}")


class UnknownIdentifierError(ParseError):
    pass


class NegativeExponentError(ParseError):
    pass


@dataclass(frozen=True)
class Token:
    kind: str  # "number", "ident", "op", "end"
    text: str
    offset: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    raw = text.encode("utf-8")
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            offset = len(text[:pos].encode("utf-8"))
            raise ParseError(f"unexpected character {text[pos]!r}", offset,
                             ("number", "identifier", "operator"))
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append(Token(kind, m.group(kind), len(text[:start].encode("utf-8"))))
        pos = m.end()
    tokens.append(Token("end", "", len(raw)))
    return tokens


class _Parser:
    def __init__(self, text: str, params: SymbolicParams):
        self.tokens = tokenize(text)
        self.pos = 0
        self.params = params
        self.hbar = params.hbar
        y, p = generators(self.hbar)
        self.env = {
            "y": y,
            "p": p,
            "i": OperatorPoly.constant(I, self.hbar),
            "hbar": OperatorPoly.constant(params.hbar, self.hbar),
            "m": OperatorPoly.constant(params.m, self.hbar),
            "omega": OperatorPoly.constant(params.omega, self.hbar),
            "lambda": OperatorPoly.constant(params.lam, self.hbar),
        }

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def error(self, expected) -> ParseError:
        t = self.tok
        what = "end of input" if t.kind == "end" else repr(t.text)
        return ParseError(f"unexpected {what}", t.offset, expected)

    def at_op(self, *ops) -> bool:
        return self.tok.kind == "op" and self.tok.text in ops

    def parse(self) -> OperatorPoly:
        if self.tok.kind == "end":
            raise self.error(("number", "identifier", "(", "-"))
        result = self.expr()
        if self.tok.kind != "end":
            raise self.error(("+", "-", "*", "/", "^", "end of input"))
        return result

    def expr(self) -> OperatorPoly:
        negate = False
        if self.at_op("-"):
            self.advance()
            negate = True
        value = self.term()
        if negate:
            value = -value
        while self.at_op("+", "-"):
            op = self.advance().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> OperatorPoly:
        value = self.factor()
        while self.at_op("*", "/"):
            op = self.advance().text
            if op == "*":
                value = value * self.factor()
            else:
                t = self.tok
                if t.kind != "number":
                    raise self.error(("number",))
                self.advance()
                d = Fraction(t.text)
                if d == 0:
                    raise ParseError("division by zero", t.offset)
                value = value / d
        return value

    def factor(self) -> OperatorPoly:
        base = self.atom()
        if self.at_op("^"):
            self.advance()
            t = self.tok
            if t.kind == "op" and t.text == "-":
                raise NegativeExponentError("negative exponent", t.offset)
            if t.kind != "number" or not t.text.isdigit():
                raise self.error(("non-negative integer",))
            self.advance()
            base = base ** int(t.text)
        return base

    def atom(self) -> OperatorPoly:
        t = self.tok
        if t.kind == "number":
            self.advance()
            return OperatorPoly.constant(Fraction(t.text), self.hbar)
        if t.kind == "ident":
            if t.text not in self.env:
                raise UnknownIdentifierError(f"unknown identifier {t.text!r}", t.offset, IDENTIFIERS)
            self.advance()
            return self.env[t.text]
        if self.at_op("("):
            self.advance()
            inner = self.expr()
            if not self.at_op(")"):
                raise self.error((")", "+", "-", "*", "/", "^"))
            self.advance()
            return inner
        raise self.error(("number", "identifier", "("))


def parse_operator(text: str, params: SymbolicParams | None = None) -> OperatorPoly:
    """Parse and evaluate ``text`` to a canonical normal-ordered polynomial."""
    if not text or not text.strip():
        raise ParseError("empty expression", 0, ("number", "identifier", "("))
    return _Parser(text, params or SymbolicParams()).parse()


def parse_equation(text: str, params: SymbolicParams | None = None) -> tuple[OperatorPoly, OperatorPoly]:
    """Split ``lhs == rhs`` and parse both sides."""
    parts = text.split("==")
    if len(parts) != 2:
        raise ParseError("expected exactly one '=='", 0, ("==",))
    lhs = parse_operator(parts[0], params)
    try:
        rhs = parse_operator(parts[1], params)
    except ParseError as exc:
        shift = len(parts[0].encode("utf-8")) + 2
        exc.offset += shift
        exc.args = (str(exc.args[0]).replace(f"at byte {exc.offset - shift}", f"at byte {exc.offset}"),)
        raise
    return lhs, rhs
