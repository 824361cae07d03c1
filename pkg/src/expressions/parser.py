# src/expressions/parser.py
"""Expression language for classes and bundles.

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := '-' factor | base ('^' INT)?
    base   := INT ('/' INT)? | NAME | NAME '(' args? ')' | '(' expr ')'
    args   := expr (',' expr)*

Whitespace is ignored. Binary operators associate to the left.
"""
from dataclasses import dataclass
from fractions import Fraction
import re
from typing import List, NamedTuple, Tuple, Union

from src.core.errors import ParseError
from src.core.graded_ring import format_rational


@dataclass(frozen=True)
class Number:
    value: Fraction


@dataclass(frozen=True)
class Symbol:
    name: str


@dataclass(frozen=True)
class Add:
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Sub:
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Mul:
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Pow:
    base: "Expression"
    exponent: int


@dataclass(frozen=True)
class Neg:
    operand: "Expression"


@dataclass(frozen=True)
class Call:
    name: str
    args: Tuple["Expression", ...]


Expression = Union[Number, Symbol, Add, Sub, Mul, Pow, Neg, Call]


class Token(NamedTuple):
    kind: str  # "int", "name", an operator character, or "end"
    text: str
    offset: int  # byte offset into the UTF-8 encoded input


_TOKEN = re.compile(r"(?P<int>[0-9]+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^/(),])")
_BASE_START = ("integer", "name", "(", "-")


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    position = 0
    while True:
        while position < len(text) and text[position].isspace():
            position += 1
        if position == len(text):
            tokens.append(Token("end", "", _byte_offset(text, position)))
            return tokens
        match = _TOKEN.match(text, position)
        if match is None:
            raise ParseError(
                f"unexpected character {text[position]!r}",
                _byte_offset(text, position),
                ("integer", "name", "operator"),
            )
        kind = match.lastgroup
        value = match.group(kind)
        start = match.start(kind)
        tokens.append(Token(value if kind == "op" else kind, value, _byte_offset(text, start)))
        position = match.end()


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


class Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.position = 0

    def peek(self) -> Token:
        return self.tokens[self.position]

    def advance(self) -> Token:
        token = self.tokens[self.position]
        self.position += 1
        return token

    def expect(self, kind: str, expected=None) -> Token:
        token = self.peek()
        if token.kind != kind:
            raise self.error(token, expected or (kind,))
        return self.advance()

    def error(self, token: Token, expected) -> ParseError:
        found = "end of input" if token.kind == "end" else repr(token.text)
        return ParseError(f"unexpected {found}", token.offset, expected)

    def parse(self) -> Expression:
        expression = self.expression()
        token = self.peek()
        if token.kind != "end":
            raise self.error(token, ("+", "-", "*", "^", "end of input"))
        return expression

    def expression(self) -> Expression:
        node = self.term()
        while self.peek().kind in ("+", "-"):
            operator = self.advance().kind
            right = self.term()
            node = Add(node, right) if operator == "+" else Sub(node, right)
        return node

    def term(self) -> Expression:
        node = self.factor()
        while self.peek().kind == "*":
            self.advance()
            node = Mul(node, self.factor())
        return node

    def factor(self) -> Expression:
        if self.peek().kind == "-":
            self.advance()
            return Neg(self.factor())
        node = self.base()
        if self.peek().kind == "^":
            self.advance()
            node = Pow(node, int(self.expect("int", ("integer",)).text))
        return node

    def base(self) -> Expression:
        token = self.peek()
        if token.kind == "int":
            self.advance()
            numerator = int(token.text)
            if self.peek().kind != "/":
                return Number(Fraction(numerator))
            self.advance()
            denominator_token = self.expect("int", ("integer",))
            denominator = int(denominator_token.text)
            if denominator == 0:
                raise ParseError("zero denominator", denominator_token.offset, ("integer",))
            return Number(Fraction(numerator, denominator))
        if token.kind == "name":
            self.advance()
            if self.peek().kind != "(":
                return Symbol(token.text)
            self.advance()
            args: List[Expression] = []
            if self.peek().kind != ")":
                args.append(self.expression())
                while self.peek().kind == ",":
                    self.advance()
                    args.append(self.expression())
            self.expect(")", (",", ")"))
            return Call(token.text, tuple(args))
        if token.kind == "(":
            self.advance()
            node = self.expression()
            self.expect(")", (")",))
            return node
        raise self.error(token, _BASE_START)


def parse(text: str) -> Expression:
    return Parser(text).parse()


# printing

_PRECEDENCE = {Add: 1, Sub: 1, Mul: 2, Neg: 3, Pow: 4}
_ATOM = 5


def _precedence(node: Expression) -> int:
    return _PRECEDENCE.get(type(node), _ATOM)


def _is_atom(node: Expression) -> bool:
    if isinstance(node, Number):
        return node.value.denominator == 1 and node.value >= 0
    return isinstance(node, (Symbol, Call))


def _wrap(node: Expression, parenthesize: bool) -> str:
    text = to_text(node)
    return f"({text})" if parenthesize else text


def to_text(node: Expression) -> str:
    """Print an expression so that ``parse(to_text(e)) == e``."""
    if isinstance(node, Number):
        return format_rational(node.value)
    if isinstance(node, Symbol):
        return node.name
    if isinstance(node, Call):
        return f"{node.name}({', '.join(to_text(a) for a in node.args)})"
    if isinstance(node, Neg):
        return "-" + _wrap(node.operand, _precedence(node.operand) < _PRECEDENCE[Neg])
    if isinstance(node, Pow):
        return f"{_wrap(node.base, not _is_atom(node.base))}^{node.exponent}"
    level = _PRECEDENCE[type(node)]
    symbol = {Add: " + ", Sub: " - ", Mul: "*"}[type(node)]
    left = _wrap(node.left, _precedence(node.left) < level)
    right = _wrap(node.right, _precedence(node.right) <= level)
    return left + symbol + right
