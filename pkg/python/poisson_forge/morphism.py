"""
Poisson-Forge Morphisms and Dixmier Classification

This module verifies Poisson morphisms and classifies monomial endomorphisms
of Poisson tori.

Features:
- Morphism Verification:
  • Generator-pair identities φ({xᵢ, xⱼ}) = {φ(xᵢ), φ(xⱼ)} for any structures
  • Relation check when the source is a quotient by Ω − ξ
  • Matrix criterion BᵀΛB = Λ for monomial maps of tori
- Classification of Monomial Endomorphisms:
  • Not Poisson, not injective, automorphism (with verified inverse) or
    injective but not surjective (lattice index and a missing generator)
  • Assertion that compatible maps of simple tori are unimodular
- Presentations:
  • Change of lattice basis Λ′ = CᵀΛC
  • Invariant-factor presentation condition and its determinant identity
  • Invariant factors of the image lattice of a monomial map
- Certificates:
  • Jacobian-determinant injectivity certificate (characteristic 0)
  • Relative escape of a map into A ⊗ R
  • Numeric automorphism bound 42·d·(d − 3)²

Use Cases:
- Reproduce injective, non-surjective torus endomorphisms
- Check candidate endomorphisms of potential and Weyl algebras
"""

import logging

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence, Union

from .analysis import is_poisson_simple_torus
from .bracket import (
    PoissonStructure,
    SkewParamMatrix,
    Torus,
)
from .lattice import (
    IntMatrix,
    det_int,
    hermite_normal_form,
    integer_nullspace,
    lattice_contains,
    smith_normal_form,
    unimodular_inverse,
)
from .poly import (
    ExponentVector,
    LaurentPoly,
    Number,
    Scalar,
    partial_derivative,
    substitute,
)


logger = logging.getLogger(__name__)


class MorphismError(Exception):
    """Raised when a map is malformed for the requested check."""

    pass


class DixmierAssertionFailure(MorphismError):
    """Raised when a compatible endomorphism of a simple torus is not unimodular."""

    pass


@dataclass(frozen=True)
class PolyMap:
    """Images of the source generators, all in one target variable context."""

    images: tuple[LaurentPoly, ...]

    def __post_init__(self) -> None:
        if not self.images:
            raise MorphismError("A map needs at least one image")
        if len({image.arity for image in self.images}) != 1:
            raise MorphismError("Images live in different variable contexts")

    @property
    def target_arity(self) -> int:
        return self.images[0].arity

    def apply(self, f: LaurentPoly) -> LaurentPoly:
        return substitute(f, self.images, self.target_arity)


@dataclass(frozen=True)
class MonomialMap:
    """φ(xᵢ) = cᵢ·x^{bᵢ} where bᵢ is column i of B."""

    B: IntMatrix
    c: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not self.B.is_square:
            raise MorphismError(f"Exponent matrix is {self.B.rows}x{self.B.cols}")
        if len(self.c) != self.B.cols:
            raise MorphismError(
                f"Expected {self.B.cols} coefficients, got {len(self.c)}"
            )
        if any(c == 0 for c in self.c):
            raise MorphismError("Monomial map coefficients must be nonzero")

    @classmethod
    def from_columns(
        cls,
        columns: Sequence[Sequence[int]],
        coefficients: Optional[Sequence[Number]] = None,
    ) -> "MonomialMap":
        c = coefficients if coefficients is not None else [1] * len(columns)
        return cls(IntMatrix.from_columns(columns), tuple(Fraction(x) for x in c))

    @property
    def n(self) -> int:
        return self.B.cols

    def to_poly_map(self) -> PolyMap:
        return PolyMap(
            tuple(
                LaurentPoly.monomial(self.B.column(i), self.c[i])
                for i in range(self.n)
            )
        )


@dataclass(frozen=True)
class PairIdentity:
    i: int
    j: int
    lhs: LaurentPoly
    rhs: LaurentPoly

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


@dataclass(frozen=True)
class MorphismReport:
    pairs: tuple[PairIdentity, ...]
    relation_image: Optional[LaurentPoly] = None

    @property
    def failure(self) -> Optional[PairIdentity]:
        return next((p for p in self.pairs if not p.holds), None)

    @property
    def passed(self) -> bool:
        relation_ok = self.relation_image is None or self.relation_image.is_zero()
        return self.failure is None and relation_ok


def check_poisson_morphism(
    src: PoissonStructure, tgt: PoissonStructure, phi: PolyMap
) -> MorphismReport:
    """
    Compare φ({xᵢ, xⱼ}) with {φ(xᵢ), φ(xⱼ)} for every generator pair i < j.

    A quotient source additionally needs φ(Ω − ξ) to vanish in the target.

    Raises:
        MorphismError: If the map does not fit the two contexts
        NegativePowerOfNonUnit: If a bracket needs a negative power of a non-unit
    """
    if len(phi.images) != src.arity or phi.target_arity != tgt.arity:
        raise MorphismError(
            f"Map has {len(phi.images)} images in {phi.target_arity} variables; "
            f"expected {src.arity} images in {tgt.arity} variables"
        )
    images = [tgt.reduce(image) for image in phi.images]
    pairs = []
    for i, j in combinations(range(src.arity), 2):
        lhs = tgt.reduce(substitute(src.generator_bracket(i, j), images, tgt.arity))
        rhs = tgt.bracket(images[i], images[j])
        pairs.append(PairIdentity(i, j, lhs, rhs))
        logger.debug(f"Pair ({i + 1},{j + 1}): {'ok' if lhs == rhs else 'differs'}")

    relation_image = None
    if src.is_quotient():
        relation = src.omega - src.xi  # type: ignore[attr-defined]
        relation_image = tgt.reduce(substitute(relation, images, tgt.arity))
    return MorphismReport(tuple(pairs), relation_image)


@dataclass(frozen=True)
class CompatReport:
    failing: Optional[tuple[int, int]] = None
    lhs: Optional[Scalar] = None
    rhs: Optional[Scalar] = None

    @property
    def passed(self) -> bool:
        return self.failing is None


def monomial_compat(lam: SkewParamMatrix, B: IntMatrix) -> CompatReport:
    """
    Check BᵀΛB = Λ entrywise; for monomial maps of tori this is exactly
    compatibility with the bracket, whatever the coefficients.
    """
    if not B.is_square or B.rows != lam.n:
        raise MorphismError(f"Exponent matrix must be {lam.n}x{lam.n}")
    columns = B.columns()
    for i, j in combinations(range(lam.n), 2):
        value = lam.pairing(columns[i], columns[j])
        if value != lam.entry(i, j):
            return CompatReport((i, j), value, lam.entry(i, j))
    return CompatReport()


@dataclass(frozen=True)
class NotPoisson:
    pair: tuple[int, int]
    lhs: LaurentPoly
    rhs: LaurentPoly
    label = "not_poisson"


@dataclass(frozen=True)
class NotInjective:
    kernel_exponent: ExponentVector
    label = "not_injective"


@dataclass(frozen=True)
class Automorphism:
    inverse: MonomialMap
    label = "automorphism"


@dataclass(frozen=True)
class InjectiveNotSurjective:
    lattice_index: int
    missing_generator: ExponentVector
    label = "injective_not_surjective"


EndoClassification = Union[
    NotPoisson, NotInjective, Automorphism, InjectiveNotSurjective
]


def _inverse_map(phi: MonomialMap) -> MonomialMap:
    inverse = unimodular_inverse(phi.B)
    coefficients = []
    for k in range(phi.n):
        d = Fraction(1)
        for j in range(phi.n):
            d *= phi.c[j] ** -inverse.entries[j][k]
        coefficients.append(d)
    return MonomialMap(inverse, tuple(coefficients))


def _verify_inverse(phi: MonomialMap, psi: MonomialMap) -> None:
    forward, backward = phi.to_poly_map(), psi.to_poly_map()
    for k in range(phi.n):
        x_k = LaurentPoly.variable(phi.n, k)
        there_and_back = backward.apply(forward.images[k])
        back_and_there = forward.apply(backward.images[k])
        if there_and_back != x_k or back_and_there != x_k:
            raise MorphismError(f"Inverse does not compose to the identity at x{k + 1}")


def missing_generator(B: IntMatrix) -> Optional[ExponentVector]:
    """Smallest standard basis vector outside the column lattice of B."""
    hnf = hermite_normal_form(B.columns(), B.rows)
    for k in range(B.rows):
        e_k = tuple(int(i == k) for i in range(B.rows))
        if not lattice_contains(hnf, e_k):
            return e_k
    return None


def classify_torus_endo(lam: SkewParamMatrix, phi: MonomialMap) -> EndoClassification:
    """
    Classify a monomial endomorphism of the Poisson torus.

    Returns:
        NotPoisson, NotInjective, Automorphism (inverse verified by composition)
        or InjectiveNotSurjective (index |det B| and a missing generator)
    """
    compat = monomial_compat(lam, phi.B)
    if not compat.passed:
        i, j = compat.failing  # type: ignore[misc]
        torus = Torus(lam)
        images = phi.to_poly_map().images
        lhs = substitute(torus.generator_bracket(i, j), images, lam.n)
        rhs = torus.bracket(images[i], images[j])
        return NotPoisson((i, j), lhs, rhs)

    det = det_int(phi.B)
    logger.info(f"Compatible monomial map with det {det}")
    if det == 0:
        return NotInjective(integer_nullspace(phi.B.transpose())[0])
    if abs(det) == 1:
        inverse = _inverse_map(phi)
        _verify_inverse(phi, inverse)
        return Automorphism(inverse)

    missing = missing_generator(phi.B)
    if missing is None:
        raise MorphismError(f"Column lattice of index {abs(det)} contains every e_k")
    return InjectiveNotSurjective(abs(det), missing)


@dataclass(frozen=True)
class DixmierReport:
    status: str
    reason: str
    det: Optional[int] = None


def simple_torus_dixmier_assert(lam: SkewParamMatrix, B: IntMatrix) -> DixmierReport:
    """
    On a simple torus every compatible exponent matrix is unimodular.

    Raises:
        DixmierAssertionFailure: If a compatible B with |det B| != 1 turns up
    """
    if not is_poisson_simple_torus(lam).simple:
        return DixmierReport("not-applicable", "torus is not Poisson simple")
    if not monomial_compat(lam, B).passed:
        return DixmierReport("not-applicable", "exponent matrix is not compatible")
    det = det_int(B)
    if abs(det) != 1:
        raise DixmierAssertionFailure(
            f"Compatible exponent matrix of a simple torus has determinant {det}"
        )
    return DixmierReport("holds", "simple and compatible, hence unimodular", det)


def _poly_det(matrix: list[list[LaurentPoly]], arity: int) -> LaurentPoly:
    """Laplace expansion along rows, memoised on the set of used columns."""
    size = len(matrix)
    memo: dict[frozenset[int], LaurentPoly] = {}

    def minor(row: int, free: frozenset[int]) -> LaurentPoly:
        if row == size:
            return LaurentPoly.one(arity)
        if free in memo:
            return memo[free]
        total = LaurentPoly.zero(arity)
        ordered = sorted(free)
        for position, col in enumerate(ordered):
            entry = matrix[row][col]
            if entry.is_zero():
                continue
            term = entry * minor(row + 1, free - {col})
            total = total - term if position % 2 else total + term
        memo[free] = total
        return total

    return minor(0, frozenset(range(size)))


@dataclass(frozen=True)
class CertificateReport:
    certified: bool
    jacobian: LaurentPoly
    columns: tuple[int, ...] = ()


def injectivity_certificate(phi: PolyMap) -> CertificateReport:
    """
    Certify injectivity from a nonzero Jacobian determinant.

    In characteristic 0 a nonzero maximal minor of the Jacobian matrix makes
    the images algebraically independent. A zero result is inconclusive.
    """
    m, n = len(phi.images), phi.target_arity
    zero = LaurentPoly.zero(n)
    if m > n:
        return CertificateReport(False, zero)
    jacobian = [
        [partial_derivative(image, j) for j in range(n)] for image in phi.images
    ]
    for cols in combinations(range(n), m):
        det = _poly_det([[row[c] for c in cols] for row in jacobian], n)
        if not det.is_zero():
            return CertificateReport(True, det, cols)
    return CertificateReport(False, zero)


def aut_bound(d: int) -> int:
    """42·d·(d − 3)²."""
    if d < 3:
        raise MorphismError(f"Automorphism bound needs d >= 3, got {d}")
    return 42 * d * (d - 3) ** 2


def change_presentation(lam: SkewParamMatrix, C: IntMatrix) -> SkewParamMatrix:
    """Λ′ = CᵀΛC, the bracket matrix in the generators x^{c₁}, …, x^{cₙ}."""
    if not C.is_square or C.rows != lam.n:
        raise MorphismError(f"Change of basis must be {lam.n}x{lam.n}")
    columns = C.columns()
    return SkewParamMatrix(
        tuple(
            tuple(lam.pairing(columns[i], columns[j]) for j in range(lam.n))
            for i in range(lam.n)
        )
    )


def invariant_factors_of_image(B: IntMatrix) -> list[int]:
    """p₁ | p₂ | … with {p₁c₁, …, pₙcₙ} a basis of the image lattice."""
    return smith_normal_form(B).invariant_factors


@dataclass(frozen=True)
class PresentationReport:
    holds: bool
    failing: Optional[tuple[int, int]]
    det_m: Optional[int]
    det_g: int
    factor_product: int

    @property
    def forces_unimodular(self) -> bool:
        """det M != 0 and the condition turn det(G)²(Πp)² into 1."""
        return self.holds and bool(self.det_m)


def presentation_condition(
    lam: SkewParamMatrix, G: IntMatrix, factors: Sequence[int]
) -> PresentationReport:
    """
    Check λ′ᵢⱼ = Σₖₜ pₖpₜ·gₖᵢ·gₜⱼ·λ′ₖₜ for one presentation (G, p).

    For uniparameter Λ′ = λM the determinant identity
    det M = det(G)²(Πpᵢ)² det M is reported through det_m.
    """
    if len(factors) != lam.n or any(p <= 0 for p in factors):
        raise MorphismError(f"Expected {lam.n} positive invariant factors")
    DG = IntMatrix.from_rows(
        [[factors[k] * e for e in G.row(k)] for k in range(lam.n)]
    )
    transformed = change_presentation(lam, DG)
    failing = None
    for i, j in combinations(range(lam.n), 2):
        if transformed.entry(i, j) != lam.entry(i, j):
            failing = (i, j)
            break
    product = 1
    for p in factors:
        product *= p
    uniparameter = lam.uniparameter()
    det_m = det_int(uniparameter[1]) if uniparameter is not None else None
    return PresentationReport(failing is None, failing, det_m, det_int(G), product)


@dataclass(frozen=True)
class EscapeReport:
    escapes: bool
    generators: tuple[int, ...]


def relative_dixmier_escape(phi: PolyMap, base_arity: int) -> EscapeReport:
    """
    For φ: A → A ⊗ R with A on the first base_arity variables, list the
    generators whose image involves a variable of R.
    """
    if base_arity > phi.target_arity:
        raise MorphismError("Base block is larger than the target context")
    escaping = tuple(
        i
        for i, image in enumerate(phi.images)
        if any(any(e[base_arity:]) for e, _ in image.items())
    )
    return EscapeReport(bool(escaping), escaping)
