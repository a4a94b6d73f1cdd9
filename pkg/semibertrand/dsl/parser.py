"""Recursive-descent parser for the curve expression language.

Grammar (whitespace between tokens is ignored)::

    expr     := term (('+' | '-') term)*
    term     := unary (('*' | '/') unary)*
    unary    := '-' unary | power
    power    := primary ('^' exponent)*
    exponent := ['-'] INTEGER | '(' ['-'] INTEGER ')'
    primary  := NUMBER | 's' | FUNC '(' expr ')' | '(' expr ')'

FUNC is one of sin, cos, sinh, cosh, exp, sqrt. Juxtaposition is not
multiplication: ``2s`` is a syntax error.
"""
import re
from dataclasses import dataclass
from typing import List

from semibertrand.core.exceptions import ExpressionSyntaxError, UnknownIdentifierError
from semibertrand.dsl.ast import FUNCTIONS, VARIABLE, Add, Call, Div, Expr, Mul, Neg, Num, Pow, Sub, Var

_TOKEN = re.compile(
    r"\s*(?:(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    offset: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        if not match:
            offset = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ExpressionSyntaxError(f"unexpected character {text[offset]!r}", offset, text)
        kind = match.lastgroup
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        pos = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.current
        self.pos += 1
        return token

    def error(self, message: str, token: Token = None) -> ExpressionSyntaxError:
        token = token or self.current
        return ExpressionSyntaxError(message, token.offset, self.text)

    def expect(self, text: str) -> Token:
        if self.current.text != text or self.current.kind != "op":
            found = self.current.text or "end of input"
            raise self.error(f"expected '{text}', found '{found}'")
        return self.advance()

    def parse(self) -> Expr:
        expr = self.expr()
        if self.current.kind != "end":
            raise self.error(f"unexpected '{self.current.text}'")
        return expr

    def expr(self) -> Expr:
        node = self.term()
        while self.current.kind == "op" and self.current.text in "+-":
            op = self.advance().text
            right = self.term()
            node = Add(node, right) if op == "+" else Sub(node, right)
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.current.kind == "op" and self.current.text in "*/":
            op = self.advance().text
            right = self.unary()
            node = Mul(node, right) if op == "*" else Div(node, right)
        return node

    def unary(self) -> Expr:
        if self.current.kind == "op" and self.current.text == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        node = self.primary()
        while self.current.kind == "op" and self.current.text == "^":
            self.advance()
            node = Pow(node, self.exponent())
        return node

    def exponent(self) -> int:
        if self.current.kind == "op" and self.current.text == "(":
            self.advance()
            value = self.signed_integer()
            self.expect(")")
            return value
        return self.signed_integer()

    def signed_integer(self) -> int:
        sign = 1
        if self.current.kind == "op" and self.current.text == "-":
            self.advance()
            sign = -1
        token = self.current
        if token.kind != "number" or not token.text.isdigit():
            raise self.error("exponent must be an integer literal")
        self.advance()
        return sign * int(token.text)

    def primary(self) -> Expr:
        token = self.current
        if token.kind == "number":
            self.advance()
            return Num(float(token.text))
        if token.kind == "name":
            self.advance()
            if token.text == VARIABLE:
                return Var()
            if token.text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(token.text, arg)
            raise UnknownIdentifierError(token.text, token.offset, self.text)
        if token.kind == "op" and token.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        found = token.text or "end of input"
        raise self.error(f"expected an operand, found '{found}'")


def parse_expr(text: str) -> Expr:
    """Parse ``text`` into an expression tree."""
    if not text or not text.strip():
        raise ExpressionSyntaxError("empty expression", 0, text or "")
    return _Parser(text).parse()
