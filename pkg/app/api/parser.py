"""
Expression parser for scalars and bihomogeneous forms.

Grammar (whitespace is ignored)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" INT)?
    atom   := INT | "z" INT | "x0" | "x1" | "y0" | "y1" | "(" expr ")"

``z<d>`` denotes a primitive d-th root of unity and is accepted in Q(z<m>)
when d divides m. Division is only allowed by nonzero constants.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from ..errors import DivisionByZero, FieldMismatch, NotBihomogeneous, ParseError
from ..models.biform import BiForm, format_monomial
from ..models.field import FieldSpec, Scalar

__all__ = ["Token", "tokenize", "parse_biform", "parse_scalar", "parse_polynomial"]

log = logging.getLogger(__name__)

# Exponent vector over (x0, x1, y0, y1)
Exponents = Tuple[int, int, int, int]
Polynomial = Dict[Exponents, Any]

_VARIABLES = {"x0": 0, "x1": 1, "y0": 2, "y1": 3}
_ONE: Exponents = (0, 0, 0, 0)

_TOKEN_RE = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[xy][01]|z\d+)|(?P<op>[-+*/^()]))")


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "name", "op" or "end"
    text: str
    position: int


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character '{text[bad]}'", bad)
        kind = match.lastgroup or "op"
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        pos = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


# --------------------------------------------------------------------------
# Polynomial arithmetic on exponent dictionaries
# --------------------------------------------------------------------------
def _clean(poly: Polynomial) -> Polynomial:
    return {e: c for e, c in poly.items() if c}


def _add(a: Polynomial, b: Polynomial) -> Polynomial:
    out = dict(a)
    for e, c in b.items():
        out[e] = out[e] + c if e in out else c
    return _clean(out)


def _neg(a: Polynomial) -> Polynomial:
    return {e: -c for e, c in a.items()}


def _mul(a: Polynomial, b: Polynomial) -> Polynomial:
    out: Polynomial = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = (ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3])
            out[e] = out[e] + ca * cb if e in out else ca * cb
    return _clean(out)


def _constant(poly: Polynomial) -> Optional[Any]:
    """The value of a constant polynomial, or None if a variable occurs."""
    if any(e != _ONE for e in poly):
        return None
    return poly.get(_ONE)


class _Parser:

    def __init__(self, text: str, field: FieldSpec) -> None:
        self.text = text
        self.field = field
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def expect(self, text: str) -> None:
        token = self.current
        if token.text != text:
            found = token.text or "end of input"
            raise ParseError(f"expected '{text}', found '{found}'", token.position)
        self.advance()

    def parse(self) -> Polynomial:
        if self.current.kind == "end":
            raise ParseError("empty expression", 0)
        poly = self.expr()
        if self.current.kind != "end":
            raise ParseError(f"unexpected '{self.current.text}'", self.current.position)
        return poly

    def expr(self) -> Polynomial:
        poly = self.term()
        while self.current.text in ("+", "-"):
            op = self.advance().text
            rhs = self.term()
            poly = _add(poly, rhs if op == "+" else _neg(rhs))
        return poly

    def term(self) -> Polynomial:
        poly = self.unary()
        while self.current.text in ("*", "/"):
            op = self.advance()
            rhs = self.unary()
            if op.text == "*":
                poly = _mul(poly, rhs)
                continue
            divisor = _constant(rhs)
            if divisor is None and rhs:
                raise ParseError("division by a non-constant expression", op.position)
            if not divisor:
                raise DivisionByZero("division by zero in expression", {"position": op.position})
            inverse = self.field.one / divisor
            poly = _clean({e: c * inverse for e, c in poly.items()})
        return poly

    def unary(self) -> Polynomial:
        if self.current.text == "-":
            self.advance()
            return _neg(self.unary())
        if self.current.text == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self.current.text != "^":
            return base
        self.advance()
        token = self.current
        if token.kind != "int":
            raise ParseError("exponent must be a non-negative integer", token.position)
        self.advance()
        result: Polynomial = {_ONE: self.field.one}
        for _ in range(int(token.text)):
            result = _mul(result, base)
        return result

    def atom(self) -> Polynomial:
        token = self.current
        if token.kind == "int":
            self.advance()
            return _clean({_ONE: self.field.from_int(int(token.text))})
        if token.kind == "name":
            self.advance()
            if token.text in _VARIABLES:
                exponents = [0, 0, 0, 0]
                exponents[_VARIABLES[token.text]] = 1
                return {tuple(exponents): self.field.one}
            return {_ONE: self._root(token)}
        if token.text == "(":
            self.advance()
            poly = self.expr()
            self.expect(")")
            return poly
        found = token.text or "end of input"
        raise ParseError(f"unexpected '{found}'", token.position)

    def _root(self, token: Token) -> Any:
        order = int(token.text[1:])
        if order < 1:
            raise ParseError(f"'{token.text}' is not a root of unity", token.position)
        try:
            return self.field.root_of_unity(order)
        except FieldMismatch as exc:
            raise ParseError(f"'{token.text}' is not available in {self.field}", token.position,
                             {"field": str(self.field)}) from exc


def parse_polynomial(text: str, field: FieldSpec) -> Polynomial:
    """Parse ``text`` into a map from exponent vectors to field elements."""
    return _Parser(text, field).parse()


def _monomial_text(e: Exponents) -> str:
    return format_monomial(e[0], e[2], e[0] + e[1], e[2] + e[3])


def parse_biform(text: str, field: FieldSpec, expected_bidegree: Optional[Tuple[int, int]] = None) -> BiForm:
    poly = parse_polynomial(text, field)
    if not poly:
        if expected_bidegree is None:
            raise ParseError("the zero form has no bidegree; give one explicitly", 0)
        return BiForm.zero(field, *expected_bidegree)
    first = next(iter(poly))
    bidegree = (first[0] + first[1], first[2] + first[3])
    for e in poly:
        if (e[0] + e[1], e[2] + e[3]) != bidegree:
            pair = [_monomial_text(first), _monomial_text(e)]
            raise NotBihomogeneous(f"monomials {pair[0]} and {pair[1]} have different bidegrees", pair)
    if expected_bidegree is not None and tuple(expected_bidegree) != bidegree:
        raise NotBihomogeneous(
            f"expected bidegree {tuple(expected_bidegree)}, got {bidegree}",
            [_monomial_text(first)],
        )
    d1, d2 = bidegree
    terms = {(e[0], e[2]): c for e, c in poly.items()}
    log.debug("parsed form of bidegree (%d, %d) with %d terms", d1, d2, len(terms))
    return BiForm.from_terms(field, d1, d2, terms)


def parse_scalar(text: str, field: FieldSpec) -> Scalar:
    poly = parse_polynomial(text, field)
    value = _constant(poly)
    if value is None and poly:
        raise ParseError(f"'{text}' is not a constant", 0)
    return Scalar(field, value if value is not None else field.zero)
