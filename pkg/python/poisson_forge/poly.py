"""
Poisson-Forge Sparse Laurent Polynomials

This module implements exact sparse Laurent-polynomial arithmetic over ℚ,
optionally extended by formal parameters. Every bracket in the library is
computed in this substrate.

Features:
- Scalars:
  • Exact rationals via fractions.Fraction
  • ℚ-linear forms c0 + Σ ck·qk in named formal parameters
  • Products defined whenever one factor is parameter-free
- Monomial Orders:
  • grevlex (default), grlex and lex with a configurable variable precedence
- Laurent Polynomials:
  • Dense exponent tuples (arity guarded by configuration) mapped to scalars
  • Ring arithmetic, partial derivatives with Laurent exponents
  • Algebra-morphism substitution with unit-monomial inversion
  • Adams (total-degree) decomposition and top forms

Use Cases:
- Evaluate Poisson brackets on tori, potential algebras and Weyl algebras
- Substitute monomial and polynomial maps into polynomials
- Feed the Gröbner kernel with exact inputs
"""

import logging

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

from .config import active_config


logger = logging.getLogger(__name__)

ExponentVector = tuple[int, ...]
Number = Union[int, Fraction]


class PolyError(Exception):
    """Raised when polynomial arithmetic receives invalid operands."""

    pass


class ArityMismatch(PolyError):
    """Raised when polynomials from different variable contexts are combined."""

    pass


class ParameterProductError(PolyError):
    """Raised when two scalars that both involve formal parameters are multiplied."""

    pass


class NegativePowerOfNonUnit(PolyError):
    """Raised when a negative power of a non-monomial image is requested."""

    pass


class Scalar:
    """
    A ℚ-linear form c0 + Σ ck·qk over named formal parameters.

    Parameters are treated as ℚ-linearly independent symbols. Instances are
    immutable and hashable; equality is coefficient-wise.
    """

    __slots__ = ("_const", "_params")

    def __init__(
        self,
        const: Number = 0,
        params: Optional[Mapping[str, Number]] = None,
    ) -> None:
        self._const = Fraction(const)
        if params:
            self._params: tuple[tuple[str, Fraction], ...] = tuple(
                sorted(
                    (name, Fraction(c)) for name, c in params.items() if c != 0
                )
            )
        else:
            self._params = ()

    @classmethod
    def of(cls, value: Union["Scalar", Number]) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value)
        raise PolyError(f"Cannot interpret {value!r} as a scalar")

    @classmethod
    def parameter(cls, name: str, coefficient: Number = 1) -> "Scalar":
        return cls(0, {name: coefficient})

    @property
    def constant(self) -> Fraction:
        return self._const

    @property
    def parameters(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self._params)

    def coefficient(self, name: str) -> Fraction:
        for param, c in self._params:
            if param == name:
                return c
        return Fraction(0)

    def components(self) -> dict[str, Fraction]:
        """Coefficients keyed by parameter name; the constant part has key ''."""
        out = {"": self._const} if self._const != 0 else {}
        out.update(self._params)
        return out

    def is_zero(self) -> bool:
        return self._const == 0 and not self._params

    def is_constant(self) -> bool:
        return not self._params

    def to_fraction(self) -> Fraction:
        if self._params:
            raise PolyError(f"Scalar {self} involves parameters {self.parameters}")
        return self._const

    def _combine(self, other: "Scalar", sign: int) -> "Scalar":
        if not other._params and not self._params:
            return Scalar(self._const + sign * other._const)
        merged = dict(self._params)
        for name, c in other._params:
            merged[name] = merged.get(name, Fraction(0)) + sign * c
        return Scalar(self._const + sign * other._const, merged)

    def __add__(self, other: object) -> "Scalar":
        if isinstance(other, (int, Fraction)):
            other = Scalar(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other: object) -> "Scalar":
        if isinstance(other, (int, Fraction)):
            other = Scalar(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self._combine(other, -1)

    def __rsub__(self, other: object) -> "Scalar":
        return (-self) + other

    def __neg__(self) -> "Scalar":
        out = Scalar(-self._const)
        out._params = tuple((name, -c) for name, c in self._params)
        return out

    def __mul__(self, other: object) -> "Scalar":
        if isinstance(other, (int, Fraction)):
            other = Scalar(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        if not self._params and not other._params:
            return Scalar(self._const * other._const)
        if self._params and other._params:
            raise ParameterProductError(
                f"Product of parameter-dependent scalars {self} and {other}"
            )
        plain, linear = (self, other) if not self._params else (other, self)
        k = plain._const
        return Scalar(
            linear._const * k, {name: c * k for name, c in linear._params}
        )

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "Scalar":
        if isinstance(other, Scalar):
            other = other.to_fraction()
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        if other == 0:
            raise ZeroDivisionError("Scalar division by zero")
        return self * (1 / Fraction(other))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return not self._params and self._const == other
        if not isinstance(other, Scalar):
            return NotImplemented
        return self._const == other._const and self._params == other._params

    def __hash__(self) -> int:
        if not self._params:
            return hash(self._const)
        return hash((self._const, self._params))

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        from .notation import render_scalar

        return f"Scalar({render_scalar(self)})"


ZERO = Scalar(0)
ONE = Scalar(1)


@dataclass(frozen=True)
class MonomialOrder:
    """
    Term order on exponent vectors.

    precedence lists variable indices from most to least significant; the
    default is x1 > x2 > ... > xn.
    """

    kind: str = "grevlex"
    precedence: Optional[tuple[int, ...]] = None

    def __post_init__(self) -> None:
        if self.kind not in ("grevlex", "grlex", "lex"):
            raise PolyError(f"Unknown monomial order kind: {self.kind}")
        if self.precedence is not None and sorted(self.precedence) != list(
            range(len(self.precedence))
        ):
            raise PolyError(f"Precedence {self.precedence} is not a permutation")

    def key(self, exponent: ExponentVector) -> tuple[int, ...]:
        """Sort key: a larger key means a larger monomial."""
        e = (
            exponent
            if self.precedence is None
            else tuple(exponent[i] for i in self.precedence)
        )
        if self.kind == "lex":
            return e
        degree = sum(e)
        if self.kind == "grlex":
            return (degree,) + e
        return (degree,) + tuple(-a for a in reversed(e))

    def greater(self, a: ExponentVector, b: ExponentVector) -> bool:
        return self.key(a) > self.key(b)


GREVLEX = MonomialOrder("grevlex")


def order_from_name(name: str) -> MonomialOrder:
    return MonomialOrder(name)


def _add_exponents(a: ExponentVector, b: ExponentVector) -> ExponentVector:
    return tuple(x + y for x, y in zip(a, b))


class LaurentPoly:
    """
    Finite sparse map from exponent vectors to nonzero scalars.

    Instances are immutable by convention; every operation returns a new
    polynomial in canonical form (no zero coefficients stored).
    """

    __slots__ = ("arity", "_terms")

    def __init__(
        self,
        arity: int,
        terms: Optional[Mapping[ExponentVector, Union[Scalar, Number]]] = None,
    ) -> None:
        limit = active_config().max_arity
        if arity < 0 or arity > limit:
            raise PolyError(f"Arity {arity} outside the supported range 0..{limit}")
        self.arity = arity
        clean: dict[ExponentVector, Scalar] = {}
        for exponent, coefficient in (terms or {}).items():
            exponent = tuple(int(e) for e in exponent)
            if len(exponent) != arity:
                raise ArityMismatch(
                    f"Exponent {exponent} does not have arity {arity}"
                )
            c = Scalar.of(coefficient)
            if not c.is_zero():
                clean[exponent] = clean.get(exponent, ZERO) + c
        self._terms = {e: c for e, c in clean.items() if not c.is_zero()}

    @classmethod
    def _wrap(cls, arity: int, terms: dict[ExponentVector, Scalar]) -> "LaurentPoly":
        poly = object.__new__(cls)
        poly.arity = arity
        poly._terms = terms
        return poly

    @classmethod
    def zero(cls, arity: int) -> "LaurentPoly":
        return cls(arity)

    @classmethod
    def constant(cls, arity: int, value: Union[Scalar, Number]) -> "LaurentPoly":
        return cls(arity, {(0,) * arity: value})

    @classmethod
    def one(cls, arity: int) -> "LaurentPoly":
        return cls.constant(arity, 1)

    @classmethod
    def monomial(
        cls,
        exponent: Sequence[int],
        coefficient: Union[Scalar, Number] = 1,
    ) -> "LaurentPoly":
        return cls(len(exponent), {tuple(exponent): coefficient})

    @classmethod
    def variable(cls, arity: int, index: int) -> "LaurentPoly":
        """The generator x_{index+1} (0-based index)."""
        exponent = [0] * arity
        exponent[index] = 1
        return cls.monomial(exponent)

    @property
    def terms(self) -> Mapping[ExponentVector, Scalar]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[ExponentVector, Scalar]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def coefficient(self, exponent: Sequence[int]) -> Scalar:
        return self._terms.get(tuple(exponent), ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def is_nonnegative(self) -> bool:
        """True when no variable occurs with a negative exponent."""
        return all(min(e, default=0) >= 0 for e in self._terms)

    def is_parameter_free(self) -> bool:
        return all(c.is_constant() for c in self._terms.values())

    def is_unit_monomial(self) -> bool:
        """Single term with an invertible (nonzero, parameter-free) coefficient."""
        if len(self._terms) != 1:
            return False
        (c,) = self._terms.values()
        return c.is_constant()

    def parameters(self) -> tuple[str, ...]:
        names: set[str] = set()
        for c in self._terms.values():
            names.update(c.parameters)
        return tuple(sorted(names))

    def degree(self) -> Optional[int]:
        """Largest Adams degree of a term, None for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=None)

    def min_degree(self) -> Optional[int]:
        return min((sum(e) for e in self._terms), default=None)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def sorted_terms(
        self, order: MonomialOrder = GREVLEX
    ) -> list[tuple[ExponentVector, Scalar]]:
        """Terms in descending monomial order."""
        return sorted(
            self._terms.items(), key=lambda t: order.key(t[0]), reverse=True
        )

    def leading_term(
        self, order: MonomialOrder = GREVLEX
    ) -> tuple[ExponentVector, Scalar]:
        if not self._terms:
            raise PolyError("Zero polynomial has no leading term")
        exponent = max(self._terms, key=order.key)
        return exponent, self._terms[exponent]

    def leading_monomial(self, order: MonomialOrder = GREVLEX) -> ExponentVector:
        return self.leading_term(order)[0]

    def _check(self, other: "LaurentPoly") -> None:
        if self.arity != other.arity:
            raise ArityMismatch(
                f"Arity mismatch: {self.arity} vs {other.arity} variables"
            )

    def __add__(self, other: object) -> "LaurentPoly":
        if isinstance(other, (int, Fraction, Scalar)):
            other = LaurentPoly.constant(self.arity, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        self._check(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s.is_zero():
                    del out[e]
                else:
                    out[e] = s
        return LaurentPoly._wrap(self.arity, out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._wrap(self.arity, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: object) -> "LaurentPoly":
        if isinstance(other, (int, Fraction, Scalar)):
            other = LaurentPoly.constant(self.arity, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: object) -> "LaurentPoly":
        return (-self) + other

    def scale(self, s: Union[Scalar, Number]) -> "LaurentPoly":
        s = Scalar.of(s)
        if s.is_zero():
            return LaurentPoly.zero(self.arity)
        out = {}
        for e, c in self._terms.items():
            p = c * s
            if not p.is_zero():
                out[e] = p
        return LaurentPoly._wrap(self.arity, out)

    def __mul__(self, other: object) -> "LaurentPoly":
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        self._check(other)
        out: dict[ExponentVector, Scalar] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = _add_exponents(e1, e2)
                p = c1 * c2
                s = out.get(e)
                out[e] = p if s is None else s + p
        return LaurentPoly._wrap(
            self.arity, {e: c for e, c in out.items() if not c.is_zero()}
        )

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            return self.inverse_monomial() ** (-k)
        result = LaurentPoly.one(self.arity)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def inverse_monomial(self) -> "LaurentPoly":
        """Inverse of a unit monomial c·x^b, namely c^-1·x^-b."""
        if not self.is_unit_monomial():
            raise NegativePowerOfNonUnit(
                f"{self!r} is not an invertible monomial in the Laurent ring"
            )
        ((e, c),) = self._terms.items()
        return LaurentPoly._wrap(
            self.arity, {tuple(-a for a in e): Scalar(1 / c.to_fraction())}
        )

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction, Scalar)):
            other = LaurentPoly.constant(self.arity, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.arity == other.arity and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.arity, frozenset(self._terms.items())))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __repr__(self) -> str:
        from .notation import render_poly

        return f"LaurentPoly({render_poly(self)})"

    def homogeneous_component(self, degree: int) -> "LaurentPoly":
        return LaurentPoly._wrap(
            self.arity, {e: c for e, c in self._terms.items() if sum(e) == degree}
        )

    def top_form(self) -> "LaurentPoly":
        """Component of maximal Adams degree (zero for the zero polynomial)."""
        d = self.degree()
        if d is None:
            return self
        return self.homogeneous_component(d)

    def map_exponents(self, arity: int, offset: int) -> "LaurentPoly":
        """Embed into a larger variable context, shifting variable indices."""
        out = {}
        for e, c in self._terms.items():
            new = [0] * arity
            new[offset : offset + self.arity] = e
            out[tuple(new)] = c
        return LaurentPoly._wrap(arity, out)


def poly_add(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    return f + g


def poly_mul(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    return f * g


def poly_scale(f: LaurentPoly, s: Union[Scalar, Number]) -> LaurentPoly:
    return f.scale(s)


def poly_sum(polys: Iterable[LaurentPoly], arity: int) -> LaurentPoly:
    total = LaurentPoly.zero(arity)
    for p in polys:
        total = total + p
    return total


def partial_derivative(f: LaurentPoly, i: int) -> LaurentPoly:
    """
    Term-wise d/dx_{i+1} (0-based index); Laurent exponents allowed.

    Raises:
        PolyError: If the index is outside the variable context
    """
    if not 0 <= i < f.arity:
        raise PolyError(f"Variable index {i} outside arity {f.arity}")
    out = {}
    for e, c in f.items():
        if e[i] != 0:
            d = list(e)
            d[i] -= 1
            out[tuple(d)] = c * e[i]
    return LaurentPoly._wrap(f.arity, out)


def substitute(
    f: LaurentPoly,
    images: Sequence[LaurentPoly],
    target_arity: Optional[int] = None,
) -> LaurentPoly:
    """
    Evaluate the algebra morphism x_i -> images[i] on f.

    Raises:
        ArityMismatch: If the number of images differs from f's arity
        NegativePowerOfNonUnit: If a negative power of a non-unit image is needed
    """
    if len(images) != f.arity:
        raise ArityMismatch(f"Expected {f.arity} images, got {len(images)}")
    if target_arity is None:
        if not images:
            raise ArityMismatch("Target arity required for a map with no images")
        target_arity = images[0].arity
    for image in images:
        if image.arity != target_arity:
            raise ArityMismatch("Images live in different variable contexts")

    powers: dict[tuple[int, int], LaurentPoly] = {}

    def power(i: int, k: int) -> LaurentPoly:
        if (i, k) not in powers:
            if k < 0 and not images[i].is_unit_monomial():
                raise NegativePowerOfNonUnit(
                    f"Variable {i + 1} occurs with exponent {k} but its image "
                    f"is not an invertible monomial"
                )
            powers[(i, k)] = images[i] ** k
        return powers[(i, k)]

    result = LaurentPoly.zero(target_arity)
    for e, c in f.items():
        term = LaurentPoly.constant(target_arity, c)
        for i, k in enumerate(e):
            if k != 0:
                term = term * power(i, k)
        result = result + term
    return result


def adams_components(f: LaurentPoly) -> dict[int, LaurentPoly]:
    """Split f by total exponent sum, degrees ascending."""
    buckets: dict[int, dict[ExponentVector, Scalar]] = {}
    for e, c in f.items():
        buckets.setdefault(sum(e), {})[e] = c
    return {d: LaurentPoly._wrap(f.arity, buckets[d]) for d in sorted(buckets)}


def monomials_up_to(
    arity: int, degree: int, min_degree: int = 0
) -> list[ExponentVector]:
    """
    Nonnegative exponent vectors with min_degree <= total degree <= degree.

    Ordered by ascending degree and, within a degree, descending grevlex.
    """
    out: list[ExponentVector] = []
    for d in range(max(min_degree, 0), degree + 1):
        layer = list(_compositions(arity, d))
        layer.sort(key=GREVLEX.key, reverse=True)
        out.extend(layer)
    return out


def _compositions(arity: int, total: int) -> Iterator[ExponentVector]:
    if arity == 0:
        if total == 0:
            yield ()
        return
    if arity == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(arity - 1, total - first):
            yield (first,) + rest
