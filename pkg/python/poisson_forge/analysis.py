"""
Poisson-Forge Simplicity and Center Analysis

Decides Poisson simplicity of tori from their exponent lattice and computes
degree-truncated Poisson centers of polynomial structures.

Features:
- Torus Simplicity:
  • Parameters treated as ℚ-linearly independent symbols
  • Integer coefficient blocks stacked side by side, one per parameter
  • Simple exactly when the stacked matrix has trivial integer left kernel
- Centers:
  • ℤ-basis of central monomial exponents of a torus
  • Truncated centers {f : deg f <= D, {f, xᵢ} = 0} by exact linear algebra

Use Cases:
- Certify that a torus is Poisson simple before a Dixmier check
- Exhibit a central monomial witnessing non-simplicity
"""

import logging

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .bracket import PoissonStructure, SkewParamMatrix, StructureError
from .lattice import IntMatrix, integer_nullspace, rational_nullspace
from .poly import ExponentVector, LaurentPoly, monomials_up_to


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SimplicityReport:
    simple: bool
    witness: Optional[ExponentVector]
    method: str

    def __post_init__(self) -> None:
        if self.simple == (self.witness is not None):
            raise ValueError("A witness accompanies exactly the non-simple verdicts")


def stacked_coefficient_matrix(lam: SkewParamMatrix) -> IntMatrix:
    """
    Integer coefficient blocks of Λ placed side by side.

    Column block k holds the denominator-cleared coefficients of parameter k
    (the constant part first); a·M = 0 iff Σᵢ aᵢλᵢⱼ = 0 for every j.
    """
    blocks = lam.integer_blocks()
    if not blocks:
        return IntMatrix(lam.n, 0, tuple(() for _ in range(lam.n)))
    rows = [
        [e for _, block in blocks for e in block.row(i)] for i in range(lam.n)
    ]
    return IntMatrix.from_rows(rows)


def monomial_center_basis(lam: SkewParamMatrix) -> list[ExponentVector]:
    """ℤ-basis of the exponents a with x^a Poisson central in the torus."""
    return integer_nullspace(stacked_coefficient_matrix(lam))


def is_poisson_simple_torus(lam: SkewParamMatrix) -> SimplicityReport:
    """
    The torus is Poisson simple iff no nonzero integer a has Σᵢ aᵢλᵢⱼ = 0 ∀j.

    Returns:
        SimplicityReport: Verdict, a primitive central exponent when not simple,
        and the method used ('rank' for one coefficient block, else 'stacked-rank')
    """
    method = "rank" if len(lam.components) <= 1 else "stacked-rank"
    basis = monomial_center_basis(lam)
    logger.info(
        f"Torus of size {lam.n}: central lattice rank {len(basis)} ({method})"
    )
    if not basis:
        return SimplicityReport(True, None, method)
    return SimplicityReport(False, basis[0], method)


def truncated_center(S: PoissonStructure, degree_bound: int) -> list[LaurentPoly]:
    """
    Basis of {f : deg f <= D, {f, xᵢ} = 0 for all i} over ℚ.

    Unknowns are the coefficients of the (reduced) monomials of degree at most
    D; each bracket coefficient splits into one equation per parameter. The
    basis is in reduced echelon form and its first element is 1.

    Raises:
        StructureError: If S has invertible variables or D is negative
    """
    if not S.is_polynomial():
        raise StructureError("Truncated centers need a polynomial structure")
    if degree_bound < 0:
        raise StructureError("Degree bound must be nonnegative")

    n = S.arity
    monomials = [
        m
        for m in monomials_up_to(n, degree_bound)
        if S.reduce(LaurentPoly.monomial(m)) == LaurentPoly.monomial(m)
    ]
    index: dict[tuple[int, ExponentVector, str], int] = {}
    equations: list[list[Fraction]] = []
    for col, m in enumerate(monomials):
        x_m = LaurentPoly.monomial(m)
        for i in range(n):
            for e, c in S.bracket(x_m, S.variable(i)).items():
                for key, value in c.components().items():
                    row = index.setdefault((i, e, key), len(equations))
                    if row == len(equations):
                        equations.append([Fraction(0)] * len(monomials))
                    equations[row][col] += value

    logger.debug(
        f"Center system: {len(equations)} equations, {len(monomials)} unknowns"
    )
    basis = []
    for vector in rational_nullspace(equations, len(monomials)):
        basis.append(
            LaurentPoly(n, {m: c for m, c in zip(monomials, vector) if c != 0})
        )
    return basis
