"""
Poisson-Forge Integer Lattice Kernel

This module provides the exact integer linear algebra underneath torus simplicity
and the classification of monomial endomorphisms.

Features:
- Integer Matrices:
  • Immutable row-major matrices over Python's arbitrary-precision integers
  • Optional skew-symmetry flag validated at construction
- Normal Forms:
  • Smith normal form U·M·V = D by repeated gcd-pivot reduction
  • Row Hermite normal form with lattice membership tests
- Kernels and Determinants:
  • Canonical ℤ-basis of the integer left kernel
  • Fraction-free (Bareiss) determinants
  • Exact inverses of unimodular matrices
  • Rational rank and right kernels for linear systems over ℚ

Use Cases:
- Decide whether a Poisson torus is simple from its exponent lattice
- Locate a monomial missing from the image of a monomial endomorphism
- Solve centrality equations exactly
"""

import logging

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence


logger = logging.getLogger(__name__)


class LatticeError(Exception):
    """Raised when an integer matrix operation receives invalid input."""

    pass


class NotUnimodular(LatticeError):
    """Raised when a matrix expected to lie in GL_n(Z) has |det| != 1."""

    pass


@dataclass(frozen=True)
class IntMatrix:
    """Row-major integer matrix; entries are unbounded Python ints."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]
    skew: bool = False

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows or any(
            len(row) != self.cols for row in self.entries
        ):
            raise LatticeError(
                f"Entries do not match declared shape {self.rows}x{self.cols}"
            )
        if any(not isinstance(e, int) for row in self.entries for e in row):
            raise LatticeError("IntMatrix entries must be integers")
        if self.skew and not self.is_skew_symmetric():
            raise LatticeError("Matrix flagged skew-symmetric is not skew-symmetric")

    @classmethod
    def from_rows(
        cls, rows: Sequence[Sequence[int]], *, skew: bool = False
    ) -> "IntMatrix":
        entries = tuple(tuple(int(e) for e in row) for row in rows)
        ncols = len(entries[0]) if entries else 0
        return cls(len(entries), ncols, entries, skew)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]]) -> "IntMatrix":
        return cls.from_rows(columns).transpose()

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls.from_rows([[0] * cols for _ in range(rows)])

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_skew_symmetric(self) -> bool:
        if not self.is_square:
            return False
        return all(
            self.entries[i][j] == -self.entries[j][i]
            for i in range(self.rows)
            for j in range(self.cols)
        )

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows(
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)]
        )

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise LatticeError(
                f"Cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        other_cols = other.columns()
        return IntMatrix.from_rows(
            [
                [sum(a * b for a, b in zip(row, col)) for col in other_cols]
                for row in self.entries
            ]
        )

    def scaled(self, k: int) -> "IntMatrix":
        return IntMatrix.from_rows([[k * e for e in row] for row in self.entries])

    def to_lists(self) -> list[list[int]]:
        return [list(row) for row in self.entries]


@dataclass(frozen=True)
class SmithDecomposition:
    """U·M·V = D with U, V unimodular and D diagonal with d1 | d2 | ..."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def invariant_factors(self) -> list[int]:
        return [self.D.entries[i][i] for i in range(min(self.D.rows, self.D.cols))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d != 0)


def smith_normal_form(M: IntMatrix) -> SmithDecomposition:
    """
    Compute the Smith normal form of an arbitrary integer matrix.

    Args:
        M: Any rectangular integer matrix

    Returns:
        SmithDecomposition: U, D, V with U·M·V = D
    """
    m, n = M.rows, M.cols
    A = M.to_lists()
    U = IntMatrix.identity(m).to_lists()
    V = IntMatrix.identity(n).to_lists()

    def swap_rows(i: int, j: int) -> None:
        if i != j:
            A[i], A[j] = A[j], A[i]
            U[i], U[j] = U[j], U[i]

    def swap_cols(i: int, j: int) -> None:
        if i != j:
            for row in A:
                row[i], row[j] = row[j], row[i]
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(src: int, dst: int, k: int) -> None:
        A[dst] = [a + k * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(src: int, dst: int, k: int) -> None:
        for row in A:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    t = 0
    while t < min(m, n):
        candidates = [
            (abs(A[i][j]), i, j)
            for i in range(t, m)
            for j in range(t, n)
            if A[i][j] != 0
        ]
        if not candidates:
            break
        _, pi, pj = min(candidates)
        swap_rows(t, pi)
        swap_cols(t, pj)

        while True:
            clean = True
            for i in range(t + 1, m):
                if A[i][t] != 0:
                    add_row(t, i, -(A[i][t] // A[t][t]))
                    if A[i][t] != 0:
                        swap_rows(t, i)
                        clean = False
            for j in range(t + 1, n):
                if A[t][j] != 0:
                    add_col(t, j, -(A[t][j] // A[t][t]))
                    if A[t][j] != 0:
                        swap_cols(t, j)
                        clean = False
            if not clean:
                continue

            offender = next(
                (
                    i
                    for i in range(t + 1, m)
                    for j in range(t + 1, n)
                    if A[i][j] % A[t][t] != 0
                ),
                None,
            )
            if offender is None:
                break
            add_row(offender, t, 1)

        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-u for u in U[t]]
        t += 1

    decomposition = SmithDecomposition(
        U=IntMatrix.from_rows(U) if m else IntMatrix(0, 0, ()),
        D=IntMatrix.from_rows(A) if m else IntMatrix(0, n, ()),
        V=IntMatrix.from_rows(V) if n else IntMatrix(0, 0, ()),
    )
    logger.debug(f"Invariant factors: {decomposition.invariant_factors}")
    return decomposition


def det_int(M: IntMatrix) -> int:
    """Exact determinant by Bareiss fraction-free elimination."""
    if not M.is_square:
        raise LatticeError(f"Determinant of non-square {M.rows}x{M.cols} matrix")
    n = M.rows
    if n == 0:
        return 1
    A = M.to_lists()
    sign = 1
    previous = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if pivot is None:
                return 0
            A[k], A[pivot] = A[pivot], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // previous
        previous = A[k][k]
    return sign * A[n - 1][n - 1]


def hermite_normal_form(rows: Iterable[Sequence[int]], width: int) -> IntMatrix:
    """
    Row-style Hermite normal form of the lattice spanned by the given rows.

    Pivots are positive, entries above each pivot are reduced into [0, pivot),
    and zero rows are dropped, so the result is canonical for the lattice.
    """
    A = [list(r) for r in rows if any(r)]
    pivot_row = 0
    for col in range(width):
        while True:
            nonzero = [i for i in range(pivot_row, len(A)) if A[i][col] != 0]
            if not nonzero:
                break
            best = min(nonzero, key=lambda i: abs(A[i][col]))
            A[pivot_row], A[best] = A[best], A[pivot_row]
            done = True
            for i in range(pivot_row + 1, len(A)):
                if A[i][col] != 0:
                    q = A[i][col] // A[pivot_row][col]
                    A[i] = [a - q * b for a, b in zip(A[i], A[pivot_row])]
                    if A[i][col] != 0:
                        done = False
            if done:
                break
        if pivot_row < len(A) and A[pivot_row][col] != 0:
            if A[pivot_row][col] < 0:
                A[pivot_row] = [-a for a in A[pivot_row]]
            p = A[pivot_row][col]
            for i in range(pivot_row):
                q = A[i][col] // p
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[pivot_row])]
            pivot_row += 1
    A = [r for r in A if any(r)]
    if not A:
        return IntMatrix(0, width, ())
    return IntMatrix.from_rows(A)


def lattice_contains(hnf: IntMatrix, vector: Sequence[int]) -> bool:
    """Membership of an integer vector in the row lattice of an HNF matrix."""
    v = list(vector)
    for row in hnf.entries:
        col = next(j for j, e in enumerate(row) if e != 0)
        if v[col] % row[col] != 0:
            return False
        q = v[col] // row[col]
        v = [a - q * b for a, b in zip(v, row)]
    return not any(v)


def _primitive(vector: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for e in vector:
        g = gcd(g, e)
    if g == 0:
        return tuple(vector)
    v = [e // g for e in vector]
    lead = next(e for e in v if e != 0)
    if lead < 0:
        v = [-e for e in v]
    return tuple(v)


def integer_nullspace(M: IntMatrix) -> list[tuple[int, ...]]:
    """
    ℤ-basis of the integer left kernel {a : a·M = 0}.

    Vectors are primitive with a positive first nonzero coordinate and are
    returned in ascending lexicographic order.
    """
    if M.rows == 0:
        return []
    if M.cols == 0:
        return [tuple(r) for r in IntMatrix.identity(M.rows).entries]
    snf = smith_normal_form(M)
    kernel_rows = [snf.U.row(i) for i in range(snf.rank, M.rows)]
    canonical = hermite_normal_form(kernel_rows, M.rows)
    basis = sorted(_primitive(row) for row in canonical.entries)
    logger.debug(f"Left kernel of {M.rows}x{M.cols} matrix has rank {len(basis)}")
    return basis


def unimodular_inverse(B: IntMatrix) -> IntMatrix:
    """
    Integer inverse of a matrix in GL_n(Z).

    Raises:
        NotUnimodular: If |det B| != 1
    """
    if not B.is_square:
        raise LatticeError(f"Inverse of non-square {B.rows}x{B.cols} matrix")
    det = det_int(B)
    if abs(det) != 1:
        raise NotUnimodular(f"Matrix has determinant {det}; not invertible over Z")
    inverse = rational_inverse([[Fraction(e) for e in row] for row in B.entries])
    return IntMatrix.from_rows([[int(e) for e in row] for row in inverse])


def rational_inverse(A: list[list[Fraction]]) -> list[list[Fraction]]:
    """Gauss–Jordan inverse over ℚ; raises LatticeError when singular."""
    n = len(A)
    work = [
        list(row) + [Fraction(int(i == j)) for j in range(n)]
        for i, row in enumerate(A)
    ]
    for col in range(n):
        pivot = next((i for i in range(col, n) if work[i][col] != 0), None)
        if pivot is None:
            raise LatticeError("Matrix is singular over Q")
        work[col], work[pivot] = work[pivot], work[col]
        p = work[col][col]
        work[col] = [e / p for e in work[col]]
        for i in range(n):
            if i != col and work[i][col] != 0:
                f = work[i][col]
                work[i] = [a - f * b for a, b in zip(work[i], work[col])]
    return [row[n:] for row in work]


def _rref(
    A: list[list[Fraction]], width: int
) -> tuple[list[list[Fraction]], list[int]]:
    rows = [list(r) for r in A]
    pivots: list[int] = []
    r = 0
    for col in range(width):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        p = rows[r][col]
        rows[r] = [e / p for e in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rational_rank(
    A: Sequence[Sequence[Fraction | int]], width: Optional[int] = None
) -> int:
    """Rank over ℚ."""
    if not A:
        return 0
    w = width if width is not None else len(A[0])
    _, pivots = _rref([[Fraction(e) for e in row] for row in A], w)
    return len(pivots)


def rational_nullspace(
    A: Sequence[Sequence[Fraction | int]], width: int
) -> list[list[Fraction]]:
    """
    Basis of the right kernel {x : A·x = 0} over ℚ, one vector per free column.

    Each basis vector has a 1 in its free column, so the basis is in reduced
    echelon form with respect to the free variables.
    """
    reduced, pivots = _rref([[Fraction(e) for e in row] for row in A], width)
    free = [c for c in range(width) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * width
        x[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            x[p] = -row[f]
        basis.append(x)
    return basis
