"""
Poisson-Forge Gröbner Engine

This module implements Buchberger's algorithm over ℚ and the isolated
singularity test for potentials.

Features:
- Buchberger Algorithm:
  • Normal pair selection (smallest lcm of leading monomials first)
  • Coprime leading monomials skipped (first criterion)
  • Content cleared from S-polynomials before reduction
  • Minimalised, inter-reduced, monic output: the reduced basis is unique
  • Optional post-hoc check that every S-polynomial reduces to zero
- Quotients:
  • Full normal forms and ideal membership
  • Finite-dimensionality and standard-monomial counting
- Singularities:
  • Jacobian ideal (Ω_x, Ω_y, Ω_z) and its quotient dimension

Use Cases:
- Decide whether a homogeneous potential has an isolated singularity
- Reduce polynomials modulo small ideals
"""

import logging

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd, lcm
from typing import Iterable, Optional

from .config import active_config
from .poly import (
    GREVLEX,
    ExponentVector,
    LaurentPoly,
    MonomialOrder,
    partial_derivative,
)


logger = logging.getLogger(__name__)

_Poly = dict[ExponentVector, Fraction]


class GroebnerError(Exception):
    """Raised when Gröbner computations receive unsupported input."""

    pass


def _divides(a: ExponentVector, b: ExponentVector) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _monomial_lcm(a: ExponentVector, b: ExponentVector) -> ExponentVector:
    return tuple(max(x, y) for x, y in zip(a, b))


def _to_internal(f: LaurentPoly) -> _Poly:
    if not f.is_nonnegative():
        raise GroebnerError("Gröbner computations need nonnegative exponents")
    if not f.is_parameter_free():
        raise GroebnerError("Gröbner computations need parameter-free coefficients")
    return {e: c.to_fraction() for e, c in f.items()}


def _leading(p: _Poly, order: MonomialOrder) -> ExponentVector:
    return max(p, key=order.key)


def _monic(p: _Poly, order: MonomialOrder) -> _Poly:
    lc = p[_leading(p, order)]
    return {e: c / lc for e, c in p.items()}


def _primitive_part(p: _Poly) -> _Poly:
    """Scale to coprime integer coefficients."""
    denominator = 1
    for c in p.values():
        denominator = lcm(denominator, c.denominator)
    numerators = [int(c * denominator) for c in p.values()]
    g = 0
    for a in numerators:
        g = gcd(g, a)
    return {e: Fraction(a, g) for e, a in zip(p, numerators)}


def _spoly(
    f: _Poly, g: _Poly, lf: ExponentVector, lg: ExponentVector
) -> _Poly:
    """S-polynomial of two monic polynomials."""
    m = _monomial_lcm(lf, lg)
    sf = tuple(a - b for a, b in zip(m, lf))
    sg = tuple(a - b for a, b in zip(m, lg))
    out: _Poly = {}
    for e, c in f.items():
        key = tuple(a + b for a, b in zip(e, sf))
        out[key] = out.get(key, Fraction(0)) + c
    for e, c in g.items():
        key = tuple(a + b for a, b in zip(e, sg))
        out[key] = out.get(key, Fraction(0)) - c
    return {e: c for e, c in out.items() if c != 0}


def _reduce(
    p: _Poly,
    basis: list[tuple[ExponentVector, _Poly]],
    order: MonomialOrder,
) -> _Poly:
    """Fully reduced remainder of p by monic (leading monomial, poly) pairs."""
    work = dict(p)
    remainder: _Poly = {}
    while work:
        e = _leading(work, order)
        c = work.pop(e)
        for lm, g in basis:
            if _divides(lm, e):
                shift = tuple(a - b for a, b in zip(e, lm))
                for t, tc in g.items():
                    if t == lm:
                        continue
                    target = tuple(a + b for a, b in zip(shift, t))
                    value = work.get(target, Fraction(0)) - c * tc
                    if value == 0:
                        work.pop(target, None)
                    else:
                        work[target] = value
                break
        else:
            remainder[e] = c
    return remainder


@dataclass(frozen=True)
class QuotientDimension:
    finite: bool
    count: Optional[int] = None


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced Gröbner basis: monic, inter-reduced, sorted by leading monomial."""

    generators: tuple[LaurentPoly, ...]
    order: MonomialOrder
    arity: int

    @property
    def leading_monomials(self) -> list[ExponentVector]:
        return [g.leading_monomial(self.order) for g in self.generators]

    def _internal(self) -> list[tuple[ExponentVector, _Poly]]:
        return [
            (g.leading_monomial(self.order), _to_internal(g)) for g in self.generators
        ]

    def normal_form(self, f: LaurentPoly) -> LaurentPoly:
        if f.arity != self.arity:
            raise GroebnerError(f"Polynomial has arity {f.arity}, ideal {self.arity}")
        remainder = _reduce(_to_internal(f), self._internal(), self.order)
        return LaurentPoly(self.arity, remainder)

    def contains(self, f: LaurentPoly) -> bool:
        return self.normal_form(f).is_zero()

    def quotient_dimension(self) -> QuotientDimension:
        return quotient_dimension(self)


def _check_guards(polys: list[LaurentPoly]) -> None:
    config = active_config()
    arity = polys[0].arity
    if arity > config.groebner_max_arity:
        raise GroebnerError(
            f"Arity {arity} exceeds the Gröbner limit {config.groebner_max_arity}"
        )
    for f in polys:
        if f.arity != arity:
            raise GroebnerError("Generators live in different variable contexts")
        degree = f.degree() or 0
        if degree > config.groebner_max_degree:
            raise GroebnerError(
                f"Input degree {degree} exceeds the Gröbner limit "
                f"{config.groebner_max_degree}"
            )


def s_pairs_reduce_to_zero(
    basis: list[tuple[ExponentVector, _Poly]], order: MonomialOrder
) -> bool:
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            (li, fi), (lj, fj) = basis[i], basis[j]
            if _reduce(_spoly(fi, fj, li, lj), basis, order):
                return False
    return True


def groebner_basis(
    gens: Iterable[LaurentPoly],
    order: MonomialOrder = GREVLEX,
    verify: Optional[bool] = None,
) -> GroebnerBasis:
    """
    Reduced Gröbner basis of the ideal generated by gens.

    Args:
        gens: Generators with nonnegative exponents and rational coefficients
        order: Monomial order
        verify: Re-check the S-pair criterion (defaults to the configuration)

    Raises:
        GroebnerError: On zero input, guard violations or a failed criterion check
    """
    polys = [f for f in gens]
    if not polys or all(f.is_zero() for f in polys):
        raise GroebnerError("Gröbner basis of the zero ideal requested")
    _check_guards(polys)
    arity = polys[0].arity

    G: list[tuple[ExponentVector, _Poly]] = []
    pairs: set[tuple[int, int]] = set()

    def add(p: _Poly) -> None:
        p = _monic(p, order)
        G.append((_leading(p, order), p))
        pairs.update((i, len(G) - 1) for i in range(len(G) - 1))

    for f in polys:
        if not f.is_zero():
            add(_to_internal(f))

    steps = 0
    while pairs:
        i, j = min(
            pairs,
            key=lambda p: (order.key(_monomial_lcm(G[p[0]][0], G[p[1]][0])), p),
        )
        pairs.remove((i, j))
        (li, fi), (lj, fj) = G[i], G[j]
        if _monomial_lcm(li, lj) == tuple(a + b for a, b in zip(li, lj)):
            continue
        s = _spoly(fi, fj, li, lj)
        if not s:
            continue
        r = _reduce(_primitive_part(s), G, order)
        steps += 1
        if r:
            add(r)
    logger.debug(f"Buchberger finished after {steps} reductions, {len(G)} elements")

    minimal: list[tuple[ExponentVector, _Poly]] = []
    for lm, p in sorted(G, key=lambda t: order.key(t[0])):
        if not any(_divides(m, lm) for m, _ in minimal):
            minimal.append((lm, p))
    reduced = []
    for k, (lm, p) in enumerate(minimal):
        others = minimal[:k] + minimal[k + 1 :]
        r = _monic(_reduce(p, others, order), order)
        reduced.append((_leading(r, order), r))

    check = active_config().verify_criterion if verify is None else verify
    if check and not s_pairs_reduce_to_zero(reduced, order):
        raise GroebnerError("Returned basis violates the S-pair criterion")

    reduced.sort(key=lambda t: order.key(t[0]))
    return GroebnerBasis(
        tuple(LaurentPoly(arity, p) for _, p in reduced), order, arity
    )


def normal_form(f: LaurentPoly, G: GroebnerBasis) -> LaurentPoly:
    """Unique fully reduced remainder; zero iff f lies in the ideal."""
    return G.normal_form(f)


def standard_monomials(G: GroebnerBasis) -> Optional[list[ExponentVector]]:
    """Monomials divisible by no leading monomial, or None when infinitely many."""
    leads = G.leading_monomials
    if any(not any(m) for m in leads):
        return []
    bounds = []
    for i in range(G.arity):
        powers = [
            m[i]
            for m in leads
            if m[i] > 0 and all(e == 0 for k, e in enumerate(m) if k != i)
        ]
        if not powers:
            return None
        bounds.append(min(powers))
    return [
        e
        for e in product(*(range(b) for b in bounds))
        if not any(_divides(m, e) for m in leads)
    ]


def quotient_dimension(G: GroebnerBasis) -> QuotientDimension:
    """finite(count) iff every variable has a pure power among leading monomials."""
    standard = standard_monomials(G)
    if standard is None:
        return QuotientDimension(False)
    return QuotientDimension(True, len(standard))


@dataclass(frozen=True)
class SingularityReport:
    isolated: bool
    dimension: Optional[int]
    basis: GroebnerBasis


def is_isolated_singularity(
    omega: LaurentPoly, order: MonomialOrder = GREVLEX
) -> SingularityReport:
    """
    Ω has an isolated singularity iff k[x,y,z]/(Ω_x, Ω_y, Ω_z) is finite.

    Raises:
        GroebnerError: If Ω is not homogeneous of degree >= 2 in 3 variables
    """
    if omega.arity != 3:
        raise GroebnerError(f"Potential must be in 3 variables, got {omega.arity}")
    if omega.is_zero() or not omega.is_homogeneous() or not omega.is_nonnegative():
        raise GroebnerError("Potential must be a homogeneous polynomial")
    if (omega.degree() or 0) < 2:
        raise GroebnerError("Potential must have degree >= 2")

    partials = [partial_derivative(omega, i) for i in range(3)]
    G = groebner_basis([p for p in partials if not p.is_zero()], order)
    dimension = quotient_dimension(G)
    logger.info(
        f"Jacobian ring: {len(G.generators)} basis elements, "
        f"dimension {dimension.count if dimension.finite else 'infinite'}"
    )
    return SingularityReport(dimension.finite, dimension.count, G)
