"""
Poisson-Forge Gradings, Valuations and Cofinite Subalgebras

This module works with the Adams grading (every generator in degree 1) and
the filtrations and subalgebras built from it.

Sign convention: a negatively indexed filtration puts Adams degree k in
filtration index −k, so the valuation ν = −Adams degree satisfies
ν({a, b}) >= ν(a) + ν(b) − w exactly when the bracket raises Adams degree by
at most w. Everything below is stated in Adams degrees and compares shifts
against w.

Features:
- Degree Shifts:
  • deg{f, g} − deg f − deg g over monomial pairs up to a bound
- Weight Valuations:
  • ν(x^e) = w⃗·e, minimum over terms, ν(0) = ∞
  • All five valuation axioms, exhaustive on monomial pairs and sampled on sums
- Associated Graded:
  • Top forms of quotient brackets against the graded potential bracket
- Cofinite Subalgebras:
  • A(d) = k ⊕ A_{≥d} and A(d, ζ) = A(d) + kζ with membership tests
  • Random closure check {A_{≥d}, A_{≥d}} ⊆ A_{≥2d−2}
  • Bounded span closure under sums, products and brackets

Use Cases:
- Validate candidate w-filtrations of potential algebras
- Construct and test the subalgebras A(d, ζ)
"""

import logging
import math
import random

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence, Union

from .bracket import (
    PoissonStructure,
    PotentialAffine,
    PotentialQuotient,
    random_poly,
)
from .config import active_config
from .poly import (
    GREVLEX,
    ExponentVector,
    LaurentPoly,
    Scalar,
    adams_components,
    monomials_up_to,
    substitute,
)


logger = logging.getLogger(__name__)

Valuation = Union[int, float]


class GradedError(Exception):
    """Raised when graded constructions receive unsupported input."""

    pass


class DegreeViolation(GradedError):
    """Raised when ζ has components outside degrees 2..d−1."""

    pass


class ZetaSquareEscapes(GradedError):
    """Raised when ζ² has a nonzero component of degree below d."""

    def __init__(self, degree: int, component: LaurentPoly) -> None:
        super().__init__(f"ζ² has a nonzero component in degree {degree}")
        self.degree = degree
        self.component = component


def _require_graded(S: PoissonStructure) -> None:
    if S.is_quotient():
        raise GradedError("Quotient structures carry a filtration, not a grading")


def _require_polynomial(S: PoissonStructure) -> None:
    _require_graded(S)
    if not S.is_polynomial():
        raise GradedError(f"{S.kind} structure is not polynomial")


@dataclass(frozen=True)
class ShiftReport:
    """
    max_shift is the smallest w for which the Adams filtration is a
    w-filtration on the sampled pairs; None when every bracket vanished.
    """

    max_shift: Optional[int]
    homogeneous: bool
    shifts: tuple[int, ...] = ()


def bracket_degree_shift(S: PoissonStructure, bound: int) -> ShiftReport:
    """Shifts deg{f, g} − deg f − deg g over monomial pairs of degree 1..bound."""
    _require_graded(S)
    monomials = [
        LaurentPoly.monomial(m) for m in monomials_up_to(S.arity, bound, min_degree=1)
    ]
    shifts: set[int] = set()
    for f, g in combinations(monomials, 2):
        value = S.bracket(f, g)
        base = (f.degree() or 0) + (g.degree() or 0)
        for degree in adams_components(value):
            shifts.add(degree - base)
    logger.info(f"Bracket degree shifts for {S.kind}: {sorted(shifts)}")
    return ShiftReport(
        max(shifts) if shifts else None, len(shifts) <= 1, tuple(sorted(shifts))
    )


@dataclass(frozen=True)
class WeightValuation:
    """ν(x^e) = w⃗·e on monomials, minimum over the terms of a polynomial."""

    weights: tuple[int, ...]

    @classmethod
    def negative_adams(cls, arity: int) -> "WeightValuation":
        return cls((-1,) * arity)

    def monomial_value(self, exponent: Sequence[int]) -> int:
        return sum(w * e for w, e in zip(self.weights, exponent))

    def value(self, f: LaurentPoly) -> Valuation:
        if f.is_zero():
            return math.inf
        return min(self.monomial_value(e) for e, _ in f.items())


@dataclass(frozen=True)
class ValuationReport:
    axiom: Optional[int] = None
    witnesses: tuple[LaurentPoly, ...] = ()
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.axiom is None


def _valuation_failure(
    nu: WeightValuation, S: PoissonStructure, w: int, a: LaurentPoly, b: LaurentPoly
) -> Optional[ValuationReport]:
    va, vb = nu.value(a), nu.value(b)
    for f in (a, b):
        if f.is_zero() != (nu.value(f) == math.inf):
            return ValuationReport(1, (f,), "ν(a) = ∞ must hold exactly for a = 0")
    if nu.value(a * b) != va + vb:
        detail = f"ν(ab) = {nu.value(a * b)}, expected {va + vb}"
        return ValuationReport(3, (a, b), detail)
    if nu.value(a + b) < min(va, vb):
        detail = f"ν(a + b) = {nu.value(a + b)} < {min(va, vb)}"
        return ValuationReport(4, (a, b), detail)
    vab = nu.value(S.bracket(a, b))
    if vab < va + vb - w:
        return ValuationReport(
            5, (a, b), f"ν({{a, b}}) = {vab} < ν(a) + ν(b) − w = {va + vb - w}"
        )
    return None


def check_w_valuation(
    nu: WeightValuation,
    S: PoissonStructure,
    w: int,
    bound: int = 4,
    trials: int = 100,
    seed: int = 0,
) -> ValuationReport:
    """
    Check the w-valuation axioms: exhaustively on pairs of monomials of degree
    at most bound (in ascending degree, so 1, x, y, z, … come first), then on
    pseudo-random sums.
    """
    _require_graded(S)
    if len(nu.weights) != S.arity:
        raise GradedError(
            f"Weight vector has {len(nu.weights)} entries for {S.arity} variables"
        )

    one = LaurentPoly.one(S.arity)
    if nu.value(one) != 0:
        return ValuationReport(2, (one,), "ν must vanish on nonzero constants")

    monomials = [LaurentPoly.monomial(m) for m in monomials_up_to(S.arity, bound)]
    for a, b in combinations(monomials, 2):
        failure = _valuation_failure(nu, S, w, a, b)
        if failure is not None:
            return failure

    rng = random.Random(seed)
    for _ in range(trials):
        a, b = random_poly(S, rng, bound), random_poly(S, rng, bound)
        failure = _valuation_failure(nu, S, w, a, b)
        if failure is not None:
            return failure
    return ValuationReport()


@dataclass(frozen=True)
class GradedCheckReport:
    trials: int
    failure: Optional[tuple[LaurentPoly, LaurentPoly, LaurentPoly, LaurentPoly]] = None

    @property
    def passed(self) -> bool:
        return self.failure is None


def associated_graded_bracket_check(
    omega: LaurentPoly,
    xi: Union[Scalar, int, Fraction],
    bound: int = 4,
    trials: int = 100,
    seed: int = 0,
) -> GradedCheckReport:
    """
    Compare top forms: T({f, g} mod (Ω − ξ)) against {T f, T g} mod Ω.

    When the graded bracket vanishes modulo Ω the quotient bracket must drop
    strictly below degree deg f + deg g + deg Ω − 3.

    Returns:
        GradedCheckReport: failure holds (f, g, quotient top form, graded bracket)
    """
    quotient = PotentialQuotient(omega, Scalar.of(xi))
    graded = PotentialQuotient(omega, Scalar(0))
    affine = PotentialAffine(omega)
    shift = quotient.degree - 3
    rng = random.Random(seed)
    for _ in range(trials):
        f, g = random_poly(quotient, rng, bound), random_poly(quotient, rng, bound)
        lhs = quotient.bracket(f, g).top_form()
        rhs = graded.normal_form_mod(affine.bracket(f.top_form(), g.top_form()))
        if not rhs.is_zero():
            ok = lhs == rhs
        else:
            top = (f.degree() or 0) + (g.degree() or 0) + shift
            ok = lhs.is_zero() or (lhs.degree() or 0) < top
        if not ok:
            logger.info("Associated graded bracket mismatch")
            return GradedCheckReport(trials, (f, g, lhs, rhs))
    return GradedCheckReport(trials)


@dataclass(frozen=True)
class SubalgebraAd:
    """A(d) = k ⊕ A_{≥d}, or A(d, ζ) = A(d) + kζ when zeta is set."""

    structure: PoissonStructure
    d: int
    zeta: Optional[LaurentPoly] = None

    def _outside(self, f: LaurentPoly) -> list[tuple[ExponentVector, Scalar]]:
        return [(e, c) for e, c in f.items() if 1 <= sum(e) < self.d]

    def decompose(self, f: LaurentPoly) -> Optional[tuple[Scalar, Scalar]]:
        """(c, t) with f − c − tζ ∈ A_{≥d}, or None when f is not a member."""
        if f.arity != self.structure.arity or not f.is_nonnegative():
            return None
        c = f.coefficient((0,) * f.arity)
        t = Scalar(0)
        if self.zeta is not None:
            lowest = min(adams_components(self.zeta))
            e, z = adams_components(self.zeta)[lowest].leading_term(GREVLEX)
            t = f.coefficient(e) / z
            f = f - self.zeta.scale(t)
        if self._outside(f):
            return None
        return c, t

    def contains(self, f: LaurentPoly) -> bool:
        return self.decompose(f) is not None


def construct_Adzeta(
    S: PoissonStructure, d: int, zeta: Optional[LaurentPoly] = None
) -> SubalgebraAd:
    """
    Build A(d) or A(d, ζ) after validating ζ.

    Raises:
        DegreeViolation: If ζ has a component outside degrees 2..d−1 or d < 4
        ZetaSquareEscapes: If ζ² has a nonzero component in degrees 1..d−1
    """
    _require_polynomial(S)
    if d < 2:
        raise GradedError(f"Threshold d must be at least 2, got {d}")
    if zeta is None or zeta.is_zero():
        return SubalgebraAd(S, d)
    S.check(zeta)
    if d < 4:
        raise DegreeViolation(f"A(d, ζ) needs d >= 4, got {d}")
    for degree in adams_components(zeta):
        if not 2 <= degree <= d - 1:
            raise DegreeViolation(
                f"ζ has a component of degree {degree}, outside 2..{d - 1}"
            )
    for degree, component in adams_components(zeta * zeta).items():
        if 1 <= degree < d:
            raise ZetaSquareEscapes(degree, component)
    logger.info(f"Accepted ζ of degrees {list(adams_components(zeta))} for d = {d}")
    return SubalgebraAd(S, d, zeta)


@dataclass(frozen=True)
class ZetaImageReport:
    image: LaurentPoly
    factor: Optional[Scalar]

    @property
    def proportional(self) -> bool:
        return self.factor is not None


def zeta_image_check(A: SubalgebraAd, images: Sequence[LaurentPoly]) -> ZetaImageReport:
    """Apply a user-supplied map σ to ζ and test whether σ(ζ) ∈ kζ."""
    if A.zeta is None:
        raise GradedError("Subalgebra has no ζ")
    image = substitute(A.zeta, images, A.structure.arity)
    e, z = A.zeta.leading_term(GREVLEX)
    factor = image.coefficient(e) / z
    if image != A.zeta.scale(factor):
        return ZetaImageReport(image, None)
    return ZetaImageReport(image, factor)


def _random_homogeneous(
    S: PoissonStructure, rng: random.Random, degree: int, max_terms: int = 3
) -> LaurentPoly:
    terms: dict[ExponentVector, int] = {}
    for _ in range(rng.randint(1, max_terms)):
        exponent = [0] * S.arity
        for _ in range(degree):
            exponent[rng.randrange(S.arity)] += 1
        terms[tuple(exponent)] = rng.choice([-3, -2, -1, 1, 2, 3])
    return LaurentPoly(S.arity, terms)


@dataclass(frozen=True)
class AdClosureReport:
    trials: int
    failure: Optional[tuple[LaurentPoly, LaurentPoly, LaurentPoly]] = None

    @property
    def passed(self) -> bool:
        return self.failure is None


def check_Ad_closure(
    S: PoissonStructure,
    d: int,
    bound: int = 6,
    trials: int = 100,
    seed: int = 0,
) -> AdClosureReport:
    """Random homogeneous f, g of degrees in [d, bound]: {f, g} ∈ A_{≥2d−2}."""
    _require_polynomial(S)
    if d < 2:
        raise GradedError(f"Threshold d must be at least 2, got {d}")
    if bound < d:
        return AdClosureReport(0)
    rng = random.Random(seed)
    for _ in range(trials):
        f = _random_homogeneous(S, rng, rng.randint(d, bound))
        g = _random_homogeneous(S, rng, rng.randint(d, bound))
        value = S.bracket(f, g)
        low = value.min_degree()
        if low is not None and low < 2 * d - 2:
            return AdClosureReport(trials, (f, g, value))
    return AdClosureReport(trials)


class _Span:
    """ℚ-span kept in echelon form keyed by leading monomial."""

    def __init__(self) -> None:
        self.rows: dict[ExponentVector, dict[ExponentVector, Fraction]] = {}

    def insert(self, f: LaurentPoly) -> bool:
        if not f.is_parameter_free():
            raise GradedError("Bounded closure needs parameter-free elements")
        v = {e: c.to_fraction() for e, c in f.items()}
        while v:
            lead = max(v, key=GREVLEX.key)
            row = self.rows.get(lead)
            if row is None:
                scale = v[lead]
                self.rows[lead] = {e: c / scale for e, c in v.items()}
                return True
            factor = v[lead]
            for e, c in row.items():
                value = v.get(e, Fraction(0)) - factor * c
                if value == 0:
                    v.pop(e, None)
                else:
                    v[e] = value
        return False

    def basis(self, arity: int) -> list[LaurentPoly]:
        """Reduced echelon basis, leading monomials descending."""
        leads = sorted(self.rows, key=GREVLEX.key, reverse=True)
        reduced: dict[ExponentVector, dict[ExponentVector, Fraction]] = {}
        for lead in reversed(leads):
            v = dict(self.rows[lead])
            for other in reduced:
                if other in v and other != lead:
                    factor = v[other]
                    for e, c in reduced[other].items():
                        value = v.get(e, Fraction(0)) - factor * c
                        if value == 0:
                            v.pop(e, None)
                        else:
                            v[e] = value
            reduced[lead] = v
        return [LaurentPoly(arity, reduced[lead]) for lead in leads]


@dataclass(frozen=True)
class ClosureResult:
    basis: list[LaurentPoly] = field(default_factory=list)
    rounds: int = 0
    converged: bool = True


def _in_box(f: LaurentPoly, box: int) -> bool:
    return all(sum(abs(a) for a in e) <= box for e, _ in f.items())


def bounded_poisson_closure(
    S: PoissonStructure,
    seeds: Sequence[LaurentPoly],
    degree_box: int,
    max_rounds: Optional[int] = None,
) -> ClosureResult:
    """
    Close span(seeds) under products and brackets inside the box Σ|eᵢ| <= box.

    Results with a term outside the box are discarded. Iteration stops at a
    fixpoint or after max_rounds rounds (configuration default).
    """
    _require_graded(S)
    rounds_limit = (
        max_rounds if max_rounds is not None else active_config().closure_max_rounds
    )
    span = _Span()
    elements: list[LaurentPoly] = []
    for seed in seeds:
        S.check(seed)
        if not _in_box(seed, degree_box):
            logger.warning(f"Seed {S.render(seed)} lies outside the box; discarded")
            continue
        if span.insert(seed):
            elements.append(seed)

    fresh = list(range(len(elements)))
    rounds = 0
    while fresh and rounds < rounds_limit:
        rounds += 1
        start = len(elements)
        seen = set(fresh)
        for i in range(start):
            for j in fresh:
                if i in seen and i > j:
                    continue
                a, b = elements[i], elements[j]
                for candidate in (a * b, S.bracket(a, b)):
                    if candidate.is_zero() or not _in_box(candidate, degree_box):
                        continue
                    if span.insert(candidate):
                        elements.append(candidate)
        fresh = list(range(start, len(elements)))
        logger.debug(f"Closure round {rounds}: {len(fresh)} new elements")
    return ClosureResult(span.basis(S.arity), rounds, not fresh)
