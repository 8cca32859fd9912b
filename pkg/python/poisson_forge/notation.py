"""
Poisson-Forge Polynomial Notation

This module owns the canonical text form of scalars and Laurent polynomials and
the small recursive-descent parser that reads it back.

Features:
- Canonical Rendering:
  • Terms in descending monomial order
  • Monomials as x1^3*x2^-2*x3^2, rationals as p/q
  • Parameter-dependent coefficients as linear forms, parenthesised when needed
- Parsing:
  • Sums, products, integer powers (negative powers of monomials), parentheses
  • Division by nonzero rational constants
  • Identifiers resolved against the variable context and declared parameters

Use Cases:
- Human-writable polynomial fixtures in JSON problem descriptors
- Byte-exact polynomial payloads in CLI reports
"""

import logging
import re

from fractions import Fraction
from typing import Optional, Sequence

from .poly import (
    GREVLEX,
    ExponentVector,
    LaurentPoly,
    MonomialOrder,
    PolyError,
    Scalar,
)


logger = logging.getLogger(__name__)

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


class NotationError(Exception):
    """Raised when a polynomial or scalar string cannot be parsed."""

    pass


def default_names(arity: int) -> tuple[str, ...]:
    return tuple(f"x{i + 1}" for i in range(arity))


def render_fraction(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def render_scalar(s: Scalar) -> str:
    """Linear form with parameters (sorted by name) first, constant last."""
    pieces: list[str] = []
    for name in s.parameters:
        c = s.coefficient(name)
        if c == 1:
            pieces.append(name)
        elif c == -1:
            pieces.append(f"-{name}")
        else:
            pieces.append(f"{render_fraction(c)}*{name}")
    if s.constant != 0 or not pieces:
        pieces.append(render_fraction(s.constant))
    out = pieces[0]
    for piece in pieces[1:]:
        out += piece if piece.startswith("-") else f"+{piece}"
    return out


def render_monomial(exponent: ExponentVector, names: Sequence[str]) -> str:
    factors = []
    for name, e in zip(names, exponent):
        if e == 1:
            factors.append(name)
        elif e != 0:
            factors.append(f"{name}^{e}")
    return "*".join(factors)


def _render_term(exponent: ExponentVector, c: Scalar, names: Sequence[str]) -> str:
    monomial = render_monomial(exponent, names)
    if not monomial:
        return render_scalar(c)
    if c == 1:
        return monomial
    if c == -1:
        return f"-{monomial}"
    if len(c.components()) == 1:
        return f"{render_scalar(c)}*{monomial}"
    return f"({render_scalar(c)})*{monomial}"


def render_poly(
    f: LaurentPoly,
    names: Optional[Sequence[str]] = None,
    order: MonomialOrder = GREVLEX,
) -> str:
    """Canonical rendering; the zero polynomial renders as '0'."""
    if f.is_zero():
        return "0"
    names = names if names is not None else default_names(f.arity)
    out = ""
    for k, (exponent, c) in enumerate(f.sorted_terms(order)):
        term = _render_term(exponent, c, names)
        if k == 0:
            out = term
        elif term.startswith("-"):
            out += f" - {term[1:]}"
        else:
            out += f" + {term}"
    return out


class _Parser:
    """Recursive-descent parser over a pre-tokenised string."""

    def __init__(
        self,
        text: str,
        variables: Sequence[str],
        parameters: Optional[Sequence[str]],
    ) -> None:
        self.text = text
        self.variables = {name: i for i, name in enumerate(variables)}
        self.arity = len(variables)
        self.parameters = None if parameters is None else set(parameters)
        self.tokens = self._tokenize(text)
        self.pos = 0

    def _tokenize(self, text: str) -> list[tuple[str, str, int]]:
        tokens = []
        index = 0
        stripped = text.rstrip()
        while index < len(stripped):
            match = _TOKEN.match(stripped, index)
            if match is None:
                raise NotationError(f"Unreadable input at position {index}: {text!r}")
            number, ident, op = match.groups()
            start = match.start(1 if number else 2 if ident else 3)
            if number:
                tokens.append(("num", number, start))
            elif ident:
                tokens.append(("ident", ident, start))
            elif op in "+-*/^()":
                tokens.append(("op", op, start))
            else:
                raise NotationError(f"Unexpected character {op!r} at position {start}")
            index = match.end()
        return tokens

    def peek(self) -> Optional[tuple[str, str, int]]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def accept(self, op: str) -> bool:
        token = self.peek()
        if token is not None and token[0] == "op" and token[1] == op:
            self.pos += 1
            return True
        return False

    def fail(self, message: str) -> NotationError:
        token = self.peek()
        where = f"position {token[2]}" if token else "end of input"
        return NotationError(f"{message} at {where} in {self.text!r}")

    def parse(self) -> LaurentPoly:
        if not self.tokens:
            raise NotationError("Empty polynomial string")
        value = self.expr()
        if self.peek() is not None:
            raise self.fail("Unexpected token")
        return value

    def expr(self) -> LaurentPoly:
        negate = False
        if self.accept("-"):
            negate = True
        else:
            self.accept("+")
        value = self.term()
        if negate:
            value = -value
        while True:
            if self.accept("+"):
                value = value + self.term()
            elif self.accept("-"):
                value = value - self.term()
            else:
                return value

    def term(self) -> LaurentPoly:
        value = self.power()
        while True:
            if self.accept("*"):
                value = value * self.power()
            elif self.accept("/"):
                divisor = self.power()
                if not divisor.is_constant() or divisor.is_zero():
                    raise self.fail("Division by a non-constant or zero")
                c = divisor.coefficient((0,) * self.arity)
                if not c.is_constant():
                    raise self.fail("Division by a parameter")
                value = value.scale(1 / c.to_fraction())
            else:
                return value

    def power(self) -> LaurentPoly:
        base = self.atom()
        if not self.accept("^"):
            return base
        parenthesised = self.accept("(")
        sign = -1 if self.accept("-") else 1
        token = self.peek()
        if token is None or token[0] != "num":
            raise self.fail("Expected an integer exponent")
        self.pos += 1
        if parenthesised and not self.accept(")"):
            raise self.fail("Expected ')'")
        try:
            return base ** (sign * int(token[1]))
        except PolyError as e:
            raise NotationError(f"Invalid power in {self.text!r}: {e}") from e

    def atom(self) -> LaurentPoly:
        token = self.peek()
        if token is None:
            raise self.fail("Unexpected end of input")
        kind, value, _ = token
        if kind == "num":
            self.pos += 1
            return LaurentPoly.constant(self.arity, int(value))
        if kind == "ident":
            self.pos += 1
            if value in self.variables:
                return LaurentPoly.variable(self.arity, self.variables[value])
            if self.parameters is None or value in self.parameters:
                return LaurentPoly.constant(self.arity, Scalar.parameter(value))
            raise NotationError(
                f"Unknown identifier '{value}' in {self.text!r}; "
                f"variables are {sorted(self.variables)}"
            )
        if self.accept("("):
            inner = self.expr()
            if not self.accept(")"):
                raise self.fail("Expected ')'")
            return inner
        raise self.fail("Unexpected token")


def parse_poly(
    text: str,
    variables: Sequence[str],
    parameters: Sequence[str] = (),
) -> LaurentPoly:
    """
    Parse a polynomial string in the canonical grammar.

    Args:
        text: Polynomial text, e.g. "x1^3*x2^-2 - 1/2*q*x3"
        variables: Variable names of the context, in index order
        parameters: Names accepted as formal parameters

    Raises:
        NotationError: On syntax errors, unknown identifiers or invalid products
    """
    try:
        return _Parser(text, variables, parameters).parse()
    except NotationError:
        raise
    except PolyError as e:
        raise NotationError(f"Invalid polynomial {text!r}: {e}") from e


def parse_scalar(
    value: object, parameters: Optional[Sequence[str]] = None
) -> Scalar:
    """
    Read a scalar from a JSON value: an integer or a linear-form string.

    With parameters=None every identifier is accepted as a parameter name.
    """
    if isinstance(value, bool):
        raise NotationError(f"Boolean {value} is not a scalar")
    if isinstance(value, int):
        return Scalar(value)
    if not isinstance(value, str):
        raise NotationError(f"Scalar must be an integer or a string, got {value!r}")
    try:
        poly = _Parser(value, (), parameters).parse()
    except PolyError as e:
        raise NotationError(f"Invalid scalar {value!r}: {e}") from e
    return poly.coefficient(())
