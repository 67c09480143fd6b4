"""
Parser for operator expressions over the letters ``a`` and ``a+``.

Grammar (whitespace is insignificant except that it separates ``a`` from ``+``)::

    expr   := ['-'] term (('+' | '-') term)*
    term   := factor (['*'] factor)*
    factor := atom ['^' NUMBER]
    atom   := 'a+' | 'a' | NUMBER ['/' NUMBER] | '(' expr ')'

``a+`` is a single token: the ``+`` belongs to the letter when it follows
``a`` directly, so ``a+ a`` is a product and ``a + a`` is a sum.
"""

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from .errors import ParseError
from .hw_core import NormalForm

logger = logging.getLogger(__name__)

A = "A"
ADAG = "ADAG"
NUMBER = "NUMBER"
SLASH = "SLASH"
PLUS = "PLUS"
MINUS = "MINUS"
STAR = "STAR"
CARET = "CARET"
LPAREN = "LPAREN"
RPAREN = "RPAREN"
END = "END"

_TOKEN_PATTERN = re.compile(
    r"""
    (?P<ADAG>a\+)
  | (?P<A>a)
  | (?P<NUMBER>[0-9]+)
  | (?P<SLASH>/)
  | (?P<PLUS>\+)
  | (?P<MINUS>-)
  | (?P<STAR>\*)
  | (?P<CARET>\^)
  | (?P<LPAREN>\()
  | (?P<RPAREN>\))
  | (?P<SPACE>\s+)
    """,
    re.VERBOSE,
)

FACTOR_START = frozenset({A, ADAG, NUMBER, LPAREN})


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    offset: int


# -- syntax tree ------------------------------------------------------


@dataclass(frozen=True)
class Letter:
    dagger: bool

    def __str__(self) -> str:
        return "a+" if self.dagger else "a"


@dataclass(frozen=True)
class Scalar:
    value: Fraction


@dataclass(frozen=True)
class Pow:
    base: "OpExpr"
    exponent: int


@dataclass(frozen=True)
class Mul:
    factors: Tuple["OpExpr", ...]


@dataclass(frozen=True)
class Add:
    terms: Tuple["OpExpr", ...]


@dataclass(frozen=True)
class Neg:
    operand: "OpExpr"


OpExpr = Union[Letter, Scalar, Pow, Mul, Add, Neg]


# -- lexer ------------------------------------------------------------


def tokenize(src: str) -> List[Token]:
    """
    Split src into tokens carrying UTF-8 byte offsets.

    Raises:
        ParseError: On a character outside the grammar
    """
    tokens: List[Token] = []
    position = 0
    while position < len(src):
        match = _TOKEN_PATTERN.match(src, position)
        if match is None:
            raise ParseError(
                f"unexpected character {src[position]!r}",
                _byte_offset(src, position),
                FACTOR_START | {PLUS, MINUS, STAR, CARET, SLASH, RPAREN},
            )
        kind = match.lastgroup
        if kind != "SPACE":
            tokens.append(Token(kind, match.group(), _byte_offset(src, position)))
        position = match.end()
    tokens.append(Token(END, "", _byte_offset(src, len(src))))
    return tokens


def _byte_offset(src: str, position: int) -> int:
    return len(src[:position].encode("utf-8"))


# -- recursive descent ------------------------------------------------


class _Parser:
    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def expect(self, kind: str) -> Token:
        if self.current.kind != kind:
            self.fail(f"unexpected {self._describe(self.current)}", {kind})
        return self.advance()

    def fail(self, message: str, expected) -> None:
        raise ParseError(message, self.current.offset, expected)

    @staticmethod
    def _describe(token: Token) -> str:
        return "end of input" if token.kind == END else f"token {token.text!r}"

    def parse_expr(self) -> OpExpr:
        terms: List[OpExpr] = []
        if self.current.kind == MINUS:
            self.advance()
            terms.append(Neg(self.parse_term()))
        else:
            terms.append(self.parse_term())
        while self.current.kind in (PLUS, MINUS):
            sign = self.advance().kind
            term = self.parse_term()
            terms.append(Neg(term) if sign == MINUS else term)
        return terms[0] if len(terms) == 1 else Add(tuple(terms))

    def parse_term(self) -> OpExpr:
        factors = [self.parse_factor()]
        while True:
            if self.current.kind == STAR:
                self.advance()
                factors.append(self.parse_factor())
            elif self.current.kind in FACTOR_START:
                factors.append(self.parse_factor())
            else:
                break
        return factors[0] if len(factors) == 1 else Mul(tuple(factors))

    def parse_factor(self) -> OpExpr:
        atom = self.parse_atom()
        if self.current.kind != CARET:
            return atom
        self.advance()
        exponent = self.expect(NUMBER)
        if self.current.kind == SLASH:
            self.fail("non-integer exponent", {NUMBER})
        return Pow(atom, int(exponent.text))

    def parse_atom(self) -> OpExpr:
        token = self.current
        if token.kind == ADAG:
            self.advance()
            return Letter(dagger=True)
        if token.kind == A:
            self.advance()
            return Letter(dagger=False)
        if token.kind == NUMBER:
            self.advance()
            value = Fraction(int(token.text))
            if self.current.kind == SLASH:
                self.advance()
                denominator = self.expect(NUMBER)
                if int(denominator.text) == 0:
                    raise ParseError("zero denominator", denominator.offset)
                value = value / int(denominator.text)
            return Scalar(value)
        if token.kind == LPAREN:
            self.advance()
            inner = self.parse_expr()
            self.expect(RPAREN)
            return inner
        self.fail(f"unexpected {self._describe(token)}", FACTOR_START)


def parse(src: str) -> OpExpr:
    """
    Parse an operator expression.

    Args:
        src: Expression text, e.g. ``"(a+)^2 a a+ + a+ a (a+)^2"``

    Returns:
        Syntax tree of the expression

    Raises:
        ParseError: With the byte offset and the set of acceptable tokens
    """
    parser = _Parser(tokenize(src))
    tree = parser.parse_expr()
    if parser.current.kind != END:
        expected = {PLUS, MINUS, STAR, CARET} | FACTOR_START
        if parser.current.kind == RPAREN:
            parser.fail("unbalanced ')'", expected)
        parser.fail(f"unexpected {parser._describe(parser.current)}", expected)
    logger.debug(f"Parsed {src!r} -> {tree}")
    return tree


def evaluate(expr: OpExpr) -> NormalForm:
    """Evaluate a syntax tree to its normal form."""
    if isinstance(expr, Letter):
        return NormalForm.creator() if expr.dagger else NormalForm.annihilator()
    if isinstance(expr, Scalar):
        return NormalForm.scalar(expr.value)
    if isinstance(expr, Pow):
        return evaluate(expr.base) ** expr.exponent
    if isinstance(expr, Mul):
        result = NormalForm.one()
        for factor in expr.factors:
            result = result * evaluate(factor)
        return result
    if isinstance(expr, Add):
        result = NormalForm.zero()
        for term in expr.terms:
            result = result + evaluate(term)
        return result
    if isinstance(expr, Neg):
        return -evaluate(expr.operand)
    raise TypeError(f"not an operator expression: {expr!r}")


def parse_operator(src: str, name: Optional[str] = None) -> NormalForm:
    """parse followed by evaluate; ``name`` only labels the debug log line."""
    result = evaluate(parse(src))
    logger.debug(f"{name or src!r} normal form: {result}")
    return result
