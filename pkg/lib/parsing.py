"""Recursive-descent parser for the polynomial expression grammar.

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := ('+' | '-') factor | power
    power  := atom ('^' INTEGER)?
    atom   := INTEGER ('/' INTEGER)? | IDENT | '(' expr ')'

Juxtaposition ("2x", "x y") is rejected rather than read as a product.
"""
import re
from fractions import Fraction
from typing import List, NamedTuple

from lib.exceptions import ProblemSyntaxError, UndeclaredVariableError
from lib.polyring import MPoly, PolyRing

__all__ = (
    'IDENTIFIER',
    'parse_polynomial',
)

IDENTIFIER = re.compile(r'[A-Za-z_][A-Za-z0-9_]*')

_TOKEN = re.compile(r'(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()])|(?P<ws>\s+)|(?P<bad>.)')


class Token(NamedTuple):
    kind: str
    text: str
    column: int


def tokenize(text: str, line: int = 0, column: int = 1) -> List[Token]:
    tokens = list()
    for match in _TOKEN.finditer(text):
        kind = match.lastgroup
        col = column + match.start()
        if kind == 'ws':
            continue
        if kind == 'bad':
            raise ProblemSyntaxError(f"Unexpected character {match.group()!r}", line, col)
        tokens.append(Token(kind, match.group(), col))
    tokens.append(Token('end', '', column + len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, ring: PolyRing, line: int, column: int):
        self.ring = ring
        self.line = line
        self.tokens = tokenize(text, line, column)
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def error(self, message, token: Token = None, cls=ProblemSyntaxError):
        token = token or self.current
        return cls(message, self.line, token.column)

    def accept(self, text: str) -> bool:
        if self.current.kind == 'op' and self.current.text == text:
            self.pos += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            raise self.error(f"Expected {text!r}, found {self.current.text or 'end of input'!r}")

    def parse(self) -> MPoly:
        if self.current.kind == 'end':
            raise self.error('Empty expression')
        result = self.expr()
        token = self.current
        if token.kind != 'end':
            if token.kind in ('num', 'ident') or token.text == '(':
                raise self.error('Implicit multiplication is not allowed, use "*"', token)
            raise self.error(f"Unexpected {token.text!r}", token)
        return result

    def expr(self) -> MPoly:
        result = self.term()
        while True:
            if self.accept('+'):
                result = result + self.term()
            elif self.accept('-'):
                result = result - self.term()
            else:
                return result

    def term(self) -> MPoly:
        result = self.factor()
        while self.accept('*'):
            result = result * self.factor()
        return result

    def factor(self) -> MPoly:
        if self.accept('-'):
            return -self.factor()
        if self.accept('+'):
            return self.factor()
        return self.power()

    def power(self) -> MPoly:
        base = self.atom()
        if self.accept('^'):
            token = self.current
            if token.kind != 'num':
                raise self.error('Exponents must be non-negative integer literals', token)
            self.pos += 1
            base = base ** int(token.text)
        return base

    def atom(self) -> MPoly:
        token = self.current
        if token.kind == 'num':
            self.pos += 1
            value = Fraction(int(token.text))
            if self.accept('/'):
                denom = self.current
                if denom.kind != 'num':
                    raise self.error('Malformed rational literal, expected an integer denominator', denom)
                self.pos += 1
                if int(denom.text) == 0:
                    raise self.error('Malformed rational literal, zero denominator', denom)
                value = value / int(denom.text)
            return self.ring.constant(value)
        if token.kind == 'ident':
            self.pos += 1
            if token.text not in self.ring.variables:
                raise self.error(f"Undeclared variable {token.text!r}", token, UndeclaredVariableError)
            return self.ring.gen(token.text)
        if self.accept('('):
            inner = self.expr()
            self.expect(')')
            return inner
        if token.text == '/':
            raise self.error('Division is only allowed inside rational literals', token)
        raise self.error(f"Unexpected {token.text or 'end of input'!r}", token)


def parse_polynomial(text: str, ring: PolyRing, line: int = 0, column: int = 1) -> MPoly:
    """Parse `text` into a polynomial of `ring`.

    `line` and `column` locate the text inside a larger document so that
    errors point at the right place.
    """
    return _Parser(text, ring, line, column).parse()
