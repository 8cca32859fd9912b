"""
Poisson-Forge Poisson Structures

This module defines every Poisson structure the library works with and
evaluates brackets {f, g} exactly.

Features:
- Structures:
  • Torus: Laurent variables, {x^u, x^v} = (uᵀΛv)·x^{u+v}
  • SkewPoly: the same bracket on polynomial variables only
  • PotentialAffine: Jacobian-determinant bracket of a homogeneous Ω in x, y, z
  • PotentialQuotient: the potential bracket modulo Ω − ξ on reduced representatives
  • Weyl: {xᵢ, yᵢ} = 1, optionally localised at the x-variables
  • Tensor: disjoint variable blocks, bracket applied blockwise
  • GeneratorTable: any table of generator brackets extended as a biderivation
- Verification:
  • Antisymmetry, bilinearity, Leibniz and Jacobi on pseudo-random elements
  • Centrality of the potential Ω
- Skew Parameter Matrices:
  • Exact Λ with formal parameters, per-parameter coefficient matrices
  • Uniparameter detection Λ = λ·M with M integral

Use Cases:
- Evaluate brackets for morphism checks and closure computations
- Validate bracket implementations and user-supplied tables
- Feed the lattice analysis with integer coefficient blocks
"""

import logging
import random

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import gcd, lcm
from typing import Mapping, Optional, Sequence, Union

from .lattice import IntMatrix
from .notation import default_names, parse_poly, render_poly, render_scalar
from .poly import (
    GREVLEX,
    ExponentVector,
    LaurentPoly,
    MonomialOrder,
    Number,
    Scalar,
    partial_derivative,
)


logger = logging.getLogger(__name__)


class StructureError(Exception):
    """Raised when a Poisson structure is malformed or misused."""

    pass


class ContextMismatch(StructureError):
    """Raised when a polynomial does not belong to a structure's variable context."""

    pass


class UnreducedQuotientInput(StructureError):
    """Raised when a quotient bracket receives a non-reduced representative."""

    pass


@dataclass(frozen=True)
class SkewParamMatrix:
    """Skew-symmetric matrix Λ = (λᵢⱼ) of scalars."""

    entries: tuple[tuple[Scalar, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.entries)
        if any(len(row) != n for row in self.entries):
            raise StructureError("Skew matrix must be square")
        for i in range(n):
            if not self.entries[i][i].is_zero():
                raise StructureError(f"Diagonal entry ({i + 1},{i + 1}) is nonzero")
            for j in range(i + 1, n):
                if self.entries[i][j] != -self.entries[j][i]:
                    raise StructureError(
                        f"Matrix is not skew-symmetric at ({i + 1},{j + 1})"
                    )

    @classmethod
    def from_rows(
        cls, rows: Sequence[Sequence[Union[Scalar, Number]]]
    ) -> "SkewParamMatrix":
        return cls(tuple(tuple(Scalar.of(e) for e in row) for row in rows))

    @classmethod
    def from_int_matrix(
        cls, M: IntMatrix, scale: Union[Scalar, Number] = 1
    ) -> "SkewParamMatrix":
        s = Scalar.of(scale)
        return cls(tuple(tuple(s * e for e in row) for row in M.entries))

    @property
    def n(self) -> int:
        return len(self.entries)

    def entry(self, i: int, j: int) -> Scalar:
        return self.entries[i][j]

    @property
    def parameters(self) -> tuple[str, ...]:
        names: set[str] = set()
        for row in self.entries:
            for e in row:
                names.update(e.parameters)
        return tuple(sorted(names))

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    @cached_property
    def components(self) -> dict[str, tuple[tuple[Fraction, ...], ...]]:
        """
        Rational coefficient matrix per parameter; key '' is the constant part.

        Only components that are nonzero somewhere are present.
        """
        keys = sorted({k for row in self.entries for e in row for k in e.components()})
        return {
            k: tuple(
                tuple(e.components().get(k, Fraction(0)) for e in row)
                for row in self.entries
            )
            for k in keys
        }

    def integer_blocks(self) -> list[tuple[str, IntMatrix]]:
        """Each component matrix scaled by the lcm of its denominators."""
        blocks = []
        for key, matrix in self.components.items():
            denominator = 1
            for row in matrix:
                for e in row:
                    denominator = lcm(denominator, e.denominator)
            blocks.append(
                (
                    key,
                    IntMatrix.from_rows(
                        [[int(e * denominator) for e in row] for row in matrix]
                    ),
                )
            )
        return blocks

    def uniparameter(self) -> Optional[tuple[Scalar, IntMatrix]]:
        """
        Write Λ = λ·M with M a primitive integer matrix, if possible.

        Returns None when Λ involves more than one component (for example a
        constant part and a parameter, or two parameters).
        """
        blocks = self.integer_blocks()
        if not blocks:
            return Scalar(1), IntMatrix.zeros(self.n, self.n)
        if len(blocks) > 1:
            return None
        key, M = blocks[0]
        g = 0
        for row in M.entries:
            for e in row:
                g = gcd(g, e)
        raw = self.components[key]
        scale = next(
            raw[i][j] / M.entries[i][j]
            for i in range(self.n)
            for j in range(self.n)
            if M.entries[i][j]
        )
        primitive = IntMatrix.from_rows([[e // g for e in row] for row in M.entries])
        lam = Scalar(scale * g) if key == "" else Scalar.parameter(key, scale * g)
        return lam, primitive

    def pairing(self, u: Sequence[int], v: Sequence[int]) -> Scalar:
        """uᵀΛv."""
        const = Fraction(0)
        params: dict[str, Fraction] = {}
        for key, matrix in self.components.items():
            total = Fraction(0)
            for i, ui in enumerate(u):
                if ui:
                    row = matrix[i]
                    total += ui * sum(
                        (row[j] * vj for j, vj in enumerate(v) if vj), Fraction(0)
                    )
            if key == "":
                const = total
            else:
                params[key] = total
        return Scalar(const, params)

    def to_json(self) -> list[list[Union[int, str]]]:
        out: list[list[Union[int, str]]] = []
        for row in self.entries:
            rendered: list[Union[int, str]] = []
            for e in row:
                if e.is_constant() and e.constant.denominator == 1:
                    rendered.append(int(e.constant))
                else:
                    rendered.append(render_scalar(e))
            out.append(rendered)
        return out


class PoissonStructure(ABC):
    """
    A Poisson bracket on a fixed variable context.

    Subclasses set names (variable names in index order) and laurent (which
    variables may carry negative exponents).
    """

    kind: str = "abstract"

    @property
    @abstractmethod
    def names(self) -> tuple[str, ...]:
        pass

    @property
    @abstractmethod
    def laurent(self) -> tuple[bool, ...]:
        pass

    @property
    def arity(self) -> int:
        return len(self.names)

    @property
    def parameters(self) -> tuple[str, ...]:
        return ()

    def is_polynomial(self) -> bool:
        return not any(self.laurent)

    def is_quotient(self) -> bool:
        return False

    def variable(self, i: int) -> LaurentPoly:
        return LaurentPoly.variable(self.arity, i)

    def parse(self, text: str) -> LaurentPoly:
        return self.reduce(parse_poly(text, self.names, self.parameters))

    def render(self, f: LaurentPoly) -> str:
        return render_poly(f, self.names)

    def check(self, f: LaurentPoly) -> None:
        """
        Raises:
            ContextMismatch: If f has the wrong arity or forbidden negative exponents
        """
        if f.arity != self.arity:
            raise ContextMismatch(
                f"{self.kind} structure has {self.arity} variables, "
                f"polynomial has {f.arity}"
            )
        for exponent, _ in f.items():
            for name, e, allowed in zip(self.names, exponent, self.laurent):
                if e < 0 and not allowed:
                    raise ContextMismatch(
                        f"Variable {name} is not invertible in the {self.kind} "
                        f"structure (exponent {e})"
                    )

    def reduce(self, f: LaurentPoly) -> LaurentPoly:
        """Canonical representative; the identity outside quotients."""
        return f

    def bracket(self, f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
        self.check(f)
        self.check(g)
        return self._bracket(f, g)

    @abstractmethod
    def _bracket(self, f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
        pass

    def generator_bracket(self, i: int, j: int) -> LaurentPoly:
        return self.bracket(self.variable(i), self.variable(j))


def biderivation_bracket(
    f: LaurentPoly,
    g: LaurentPoly,
    table: Mapping[tuple[int, int], LaurentPoly],
) -> LaurentPoly:
    """Σ_{i<j} (∂ᵢf·∂ⱼg − ∂ⱼf·∂ᵢg)·{xᵢ, xⱼ} over the nonzero table entries."""
    result = LaurentPoly.zero(f.arity)
    df: dict[int, LaurentPoly] = {}
    dg: dict[int, LaurentPoly] = {}

    def d(cache: dict[int, LaurentPoly], h: LaurentPoly, k: int) -> LaurentPoly:
        if k not in cache:
            cache[k] = partial_derivative(h, k)
        return cache[k]

    for (i, j), value in table.items():
        if value.is_zero():
            continue
        coefficient = d(df, f, i) * d(dg, g, j) - d(df, f, j) * d(dg, g, i)
        if not coefficient.is_zero():
            result = result + coefficient * value
    return result


@dataclass(frozen=True)
class Torus(PoissonStructure):
    """Poisson torus: Laurent polynomials with {xᵢ, xⱼ} = λᵢⱼ·xᵢxⱼ."""

    lam: SkewParamMatrix
    kind = "torus"

    @property
    def names(self) -> tuple[str, ...]:
        return default_names(self.lam.n)

    @property
    def laurent(self) -> tuple[bool, ...]:
        return (True,) * self.lam.n

    @property
    def parameters(self) -> tuple[str, ...]:
        return self.lam.parameters

    def _bracket(self, f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
        out: dict[ExponentVector, Scalar] = {}
        for u, a in f.items():
            for v, b in g.items():
                weight = self.lam.pairing(u, v)
                if weight.is_zero():
                    continue
                e = tuple(x + y for x, y in zip(u, v))
                term = a * b * weight
                out[e] = out[e] + term if e in out else term
        return LaurentPoly(self.arity, out)


@dataclass(frozen=True)
class SkewPoly(Torus):
    """Quantum-plane style polynomial algebra {xᵢ, xⱼ} = λᵢⱼ·xᵢxⱼ, no inverses."""

    kind = "skew"

    @property
    def laurent(self) -> tuple[bool, ...]:
        return (False,) * self.lam.n


def _validate_potential(omega: LaurentPoly) -> int:
    if omega.arity != 3:
        raise StructureError(f"Potential must be in 3 variables, got {omega.arity}")
    if omega.is_zero() or not omega.is_homogeneous():
        raise StructureError("Potential must be a nonzero homogeneous polynomial")
    if not omega.is_nonnegative():
        raise StructureError("Potential must have nonnegative exponents")
    degree = omega.degree() or 0
    if degree < 2:
        raise StructureError(f"Potential must have Adams degree >= 2, got {degree}")
    return degree


@dataclass(frozen=True)
class PotentialAffine(PoissonStructure):
    """
    k[x, y, z] with {f, g} = det(∇f, ∇g, ∇Ω).

    In particular {x, y} = Ω_z, {y, z} = Ω_x and {z, x} = Ω_y.
    """

    omega: LaurentPoly
    kind = "potential"

    def __post_init__(self) -> None:
        _validate_potential(self.omega)

    @property
    def names(self) -> tuple[str, ...]:
        return ("x", "y", "z")

    @property
    def laurent(self) -> tuple[bool, ...]:
        return (False, False, False)

    @property
    def degree(self) -> int:
        return self.omega.degree() or 0

    @cached_property
    def gradient(self) -> tuple[LaurentPoly, LaurentPoly, LaurentPoly]:
        return (
            partial_derivative(self.omega, 0),
            partial_derivative(self.omega, 1),
            partial_derivative(self.omega, 2),
        )

    def _bracket(self, f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
        fx, fy, fz = (partial_derivative(f, i) for i in range(3))
        gx, gy, gz = (partial_derivative(g, i) for i in range(3))
        ox, oy, oz = self.gradient
        return (
            fx * (gy * oz - gz * oy)
            - fy * (gx * oz - gz * ox)
            + fz * (gx * oy - gy * ox)
        )


@dataclass(frozen=True)
class PotentialQuotient(PotentialAffine):
    """A_Ω / (Ω − ξ); elements are represented by their reduced normal form."""

    xi: Scalar = field(default_factory=lambda: Scalar(0))
    order: MonomialOrder = GREVLEX
    kind = "potential-quotient"

    def __post_init__(self) -> None:
        super().__post_init__()
        if not self.omega.is_parameter_free() or not self.xi.is_constant():
            raise StructureError("Quotient potential and ξ must be parameter-free")

    def is_quotient(self) -> bool:
        return True

    @cached_property
    def relation(self) -> LaurentPoly:
        """Ω − ξ scaled to be monic in the structure's order."""
        g = self.omega - self.xi
        _, lead = g.leading_term(self.order)
        return g.scale(1 / lead.to_fraction())

    def normal_form_mod(self, f: LaurentPoly) -> LaurentPoly:
        """Fully reduced remainder of f under division by Ω − ξ."""
        self.check(f)
        relation = self.relation
        lead = relation.leading_monomial(self.order)
        tail = [(e, c) for e, c in relation.items() if e != lead]
        work: dict[ExponentVector, Scalar] = dict(f.items())
        remainder: dict[ExponentVector, Scalar] = {}
        while work:
            e = max(work, key=self.order.key)
            c = work.pop(e)
            shift = tuple(a - b for a, b in zip(e, lead))
            if min(shift) < 0:
                remainder[e] = c
                continue
            for t, tc in tail:
                target = tuple(a + b for a, b in zip(shift, t))
                value = work.get(target, Scalar(0)) - c * tc
                if value.is_zero():
                    work.pop(target, None)
                else:
                    work[target] = value
        return LaurentPoly(self.arity, remainder)

    def reduce(self, f: LaurentPoly) -> LaurentPoly:
        return self.normal_form_mod(f)

    def _require_reduced(self, f: LaurentPoly) -> None:
        if self.normal_form_mod(f) != f:
            raise UnreducedQuotientInput(
                f"{self.render(f)} is not reduced modulo Ω − ξ; "
                f"use normal_form_mod first"
            )

    def bracket(self, f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
        self.check(f)
        self.check(g)
        self._require_reduced(f)
        self._require_reduced(g)
        return self.normal_form_mod(super()._bracket(f, g))

    def _bracket(self, f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
        return self.normal_form_mod(super()._bracket(f, g))


def normal_form_mod(S: PotentialQuotient, f: LaurentPoly) -> LaurentPoly:
    return S.normal_form_mod(f)


@dataclass(frozen=True)
class Weyl(PoissonStructure):
    """
    Poisson Weyl algebra on x₁, y₁, …, xₙ, yₙ with {xᵢ, yᵢ} = 1.

    laurent_x permits negative exponents of the x-variables (the localisation
    at x used by the non-Dixmier example).
    """

    pairs: int
    laurent_x: bool = False
    kind = "weyl"

    def __post_init__(self) -> None:
        if self.pairs < 1:
            raise StructureError("Weyl algebra needs at least one pair of variables")

    @property
    def names(self) -> tuple[str, ...]:
        if self.pairs == 1:
            return ("x", "y")
        return tuple(
            name for k in range(1, self.pairs + 1) for name in (f"x{k}", f"y{k}")
        )

    @property
    def laurent(self) -> tuple[bool, ...]:
        return (self.laurent_x, False) * self.pairs

    def _bracket(self, f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
        result = LaurentPoly.zero(self.arity)
        for k in range(self.pairs):
            x, y = 2 * k, 2 * k + 1
            result = result + (
                partial_derivative(f, x) * partial_derivative(g, y)
                - partial_derivative(f, y) * partial_derivative(g, x)
            )
        return result


@dataclass(frozen=True)
class GeneratorTable(PoissonStructure):
    """
    Bracket given by a table {xᵢ, xⱼ} for i < j, extended as a biderivation.

    Nothing guarantees Jacobi; verify_poisson_axioms reports violations.
    """

    table: tuple[tuple[tuple[int, int], LaurentPoly], ...]
    variable_names: tuple[str, ...]
    laurent_variables: bool = False
    kind = "table"

    def __post_init__(self) -> None:
        n = len(self.variable_names)
        for (i, j), value in self.table:
            if not (0 <= i < j < n):
                raise StructureError(
                    f"Table entry ({i + 1},{j + 1}) must satisfy i < j <= {n}"
                )
            if value.arity != n:
                raise ContextMismatch(f"Table entry ({i + 1},{j + 1}) has wrong arity")

    @property
    def names(self) -> tuple[str, ...]:
        return self.variable_names

    @property
    def laurent(self) -> tuple[bool, ...]:
        return (self.laurent_variables,) * len(self.variable_names)

    @property
    def parameters(self) -> tuple[str, ...]:
        names: set[str] = set()
        for _, value in self.table:
            names.update(value.parameters())
        return tuple(sorted(names))

    def _bracket(self, f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
        return biderivation_bracket(f, g, dict(self.table))


@dataclass(frozen=True)
class Tensor(PoissonStructure):
    """
    Tensor product of structures on disjoint variable blocks.

    {a⊗b, a′⊗b′} = {a, a′}⊗bb′ + aa′⊗{b, b′}; generators of different blocks
    Poisson-commute.
    """

    factors: tuple[PoissonStructure, ...]
    kind = "tensor"

    def __post_init__(self) -> None:
        if not self.factors:
            raise StructureError("Tensor product needs at least one factor")
        for factor in self.factors:
            if factor.is_quotient():
                raise StructureError(
                    "Quotient structures cannot be tensor factors; "
                    "their bracket is not a biderivation on representatives"
                )

    @property
    def offsets(self) -> tuple[int, ...]:
        out, total = [], 0
        for factor in self.factors:
            out.append(total)
            total += factor.arity
        return tuple(out)

    @cached_property
    def names(self) -> tuple[str, ...]:  # type: ignore[override]
        merged = [name for factor in self.factors for name in factor.names]
        if len(set(merged)) == len(merged):
            return tuple(merged)
        return tuple(
            f"{name}_{b + 1}"
            for b, factor in enumerate(self.factors)
            for name in factor.names
        )

    @property
    def laurent(self) -> tuple[bool, ...]:
        return tuple(flag for factor in self.factors for flag in factor.laurent)

    @property
    def parameters(self) -> tuple[str, ...]:
        names: set[str] = set()
        for factor in self.factors:
            names.update(factor.parameters)
        return tuple(sorted(names))

    @cached_property
    def table(self) -> dict[tuple[int, int], LaurentPoly]:
        entries: dict[tuple[int, int], LaurentPoly] = {}
        for factor, offset in zip(self.factors, self.offsets):
            for i, j in combinations(range(factor.arity), 2):
                value = factor.generator_bracket(i, j)
                if not value.is_zero():
                    entries[(offset + i, offset + j)] = value.map_exponents(
                        self.arity, offset
                    )
        return entries

    def _bracket(self, f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
        return biderivation_bracket(f, g, self.table)


def bracket(S: PoissonStructure, f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """
    Exact Poisson bracket {f, g} in S.

    Raises:
        ContextMismatch: If f or g lies outside S's variable context
        UnreducedQuotientInput: If S is a quotient and an input is not reduced
    """
    return S.bracket(f, g)


def generator_bracket_table(S: PoissonStructure) -> list[list[LaurentPoly]]:
    """Matrix of generator brackets {xᵢ, xⱼ}."""
    n = S.arity
    rows = [[LaurentPoly.zero(n) for _ in range(n)] for _ in range(n)]
    for i, j in combinations(range(n), 2):
        value = S.generator_bracket(i, j)
        rows[i][j] = value
        rows[j][i] = -value
    return rows


def random_monomial(
    S: PoissonStructure, rng: random.Random, degree_bound: int
) -> ExponentVector:
    """
    Exponent vector with Σ|eᵢ| <= degree_bound.

    Negative exponents appear only on variables the structure inverts.
    """
    degree = rng.randint(0, degree_bound)
    exponent = [0] * S.arity
    for _ in range(degree):
        exponent[rng.randrange(S.arity)] += 1
    return tuple(
        -e if allowed and e and rng.random() < 0.5 else e
        for e, allowed in zip(exponent, S.laurent)
    )


def random_poly(
    S: PoissonStructure,
    rng: random.Random,
    degree_bound: int,
    max_terms: int = 3,
) -> LaurentPoly:
    """Reduced pseudo-random element with small nonzero integer coefficients."""
    terms: dict[ExponentVector, int] = {}
    for _ in range(rng.randint(1, max_terms)):
        terms[random_monomial(S, rng, degree_bound)] = rng.choice(
            [-3, -2, -1, 1, 2, 3]
        )
    return S.reduce(LaurentPoly(S.arity, terms))


@dataclass(frozen=True)
class AxiomFailure:
    axiom: str
    operands: tuple[LaurentPoly, ...]
    residue: LaurentPoly


@dataclass(frozen=True)
class AxiomReport:
    """Outcome of verify_poisson_axioms; failure is None when every check passed."""

    trials: int
    degree_bound: int
    failure: Optional[AxiomFailure] = None

    @property
    def passed(self) -> bool:
        return self.failure is None


def _axiom_residues(
    S: PoissonStructure, f: LaurentPoly, g: LaurentPoly, h: LaurentPoly
) -> list[tuple[str, LaurentPoly]]:
    b = S.bracket
    fg, gh, hf = b(f, g), b(g, h), b(h, f)
    return [
        ("antisymmetry", fg + b(g, f)),
        ("bilinearity", b(S.reduce(f.scale(2) - h), g) - (fg.scale(2) + gh)),
        (
            "leibniz",
            b(f, S.reduce(g * h)) - S.reduce(fg * h + g * (-hf)),
        ),
        ("jacobi", b(f, gh) + b(g, hf) + b(h, fg)),
    ]


def verify_poisson_axioms(
    S: PoissonStructure,
    degree_bound: int = 4,
    trials: int = 100,
    seed: int = 0,
) -> AxiomReport:
    """
    Check antisymmetry, bilinearity, Leibniz and Jacobi on generator triples and
    on pseudo-random elements of degree at most degree_bound.

    Returns:
        AxiomReport: The first counterexample, or a pass
    """
    logger.info(f"Verifying Poisson axioms for {S.kind} structure ({trials} trials)")
    for i, j, k in combinations(range(S.arity), 3):
        x, y, z = S.variable(i), S.variable(j), S.variable(k)
        residue = (
            S.bracket(x, S.bracket(y, z))
            + S.bracket(y, S.bracket(z, x))
            + S.bracket(z, S.bracket(x, y))
        )
        if not residue.is_zero():
            logger.info(f"Jacobi fails on generators {i + 1}, {j + 1}, {k + 1}")
            return AxiomReport(
                trials, degree_bound, AxiomFailure("jacobi", (x, y, z), residue)
            )

    rng = random.Random(seed)
    for trial in range(trials):
        f, g, h = (random_poly(S, rng, degree_bound) for _ in range(3))
        for axiom, residue in _axiom_residues(S, f, g, h):
            if not residue.is_zero():
                logger.info(f"Axiom '{axiom}' fails in trial {trial}")
                return AxiomReport(
                    trials, degree_bound, AxiomFailure(axiom, (f, g, h), residue)
                )
    return AxiomReport(trials, degree_bound)


@dataclass(frozen=True)
class CentralityReport:
    central: bool
    brackets: tuple[LaurentPoly, ...]


def omega_centrality(S: PotentialAffine) -> CentralityReport:
    """{Ω, xᵢ} for each generator; Ω is central iff all vanish."""
    omega = S.reduce(S.omega)
    brackets = tuple(S.bracket(omega, S.variable(i)) for i in range(3))
    return CentralityReport(all(b.is_zero() for b in brackets), brackets)
