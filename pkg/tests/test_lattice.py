"""
Unit tests for the integer lattice tools.

Covers Smith and Hermite normal forms, exact determinants, integer left
kernels and the rational helpers, with sympy as a determinant oracle.
"""

from fractions import Fraction

import pytest
import sympy

from hypothesis import given, settings
from hypothesis import strategies as st

from poisson_forge.lattice import (
    IntMatrix,
    LatticeError,
    NotUnimodular,
    det_int,
    hermite_normal_form,
    integer_nullspace,
    lattice_contains,
    rational_inverse,
    rational_nullspace,
    rational_rank,
    smith_normal_form,
    unimodular_inverse,
)


def square_matrices(max_size: int = 4, bound: int = 6):
    """Strategy for small square integer matrices."""
    return st.integers(min_value=1, max_value=max_size).flatmap(
        lambda n: st.lists(
            st.lists(
                st.integers(min_value=-bound, max_value=bound),
                min_size=n,
                max_size=n,
            ),
            min_size=n,
            max_size=n,
        )
    )


class TestIntMatrix:
    """Test cases for the IntMatrix container."""

    def test_shape_mismatch_rejected(self):
        """Test that entries must match the declared shape."""
        with pytest.raises(LatticeError):
            IntMatrix(2, 2, ((1, 2),))

    def test_skew_flag_checked(self):
        """Test that the skew flag is validated."""
        with pytest.raises(LatticeError):
            IntMatrix.from_rows([[0, 1], [1, 0]], skew=True)
        M = IntMatrix.from_rows([[0, 1], [-1, 0]], skew=True)
        assert M.is_skew_symmetric()

    def test_from_columns_and_transpose(self):
        """Test column construction and transposition."""
        M = IntMatrix.from_columns([(1, 2), (3, 4)])
        assert M.to_lists() == [[1, 3], [2, 4]]
        assert M.transpose().to_lists() == [[1, 2], [3, 4]]

    def test_matmul(self):
        """Test integer matrix multiplication."""
        A = IntMatrix.from_rows([[1, 2], [3, 4]])
        B = IntMatrix.from_rows([[0, 1], [1, 0]])
        assert (A @ B).to_lists() == [[2, 1], [4, 3]]

    def test_matmul_shape_error(self):
        """Test that incompatible shapes raise."""
        with pytest.raises(LatticeError):
            IntMatrix.identity(2) @ IntMatrix.identity(3)


class TestSmithNormalForm:
    """Test cases for the Smith normal form."""

    def test_known_invariant_factors(self):
        """Test a textbook example with invariant factors 2, 6, 12."""
        M = IntMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
        snf = smith_normal_form(M)
        assert snf.invariant_factors == [2, 6, 12]
        assert snf.rank == 3
        assert (snf.U @ M @ snf.V) == snf.D

    def test_rank_deficient(self):
        """Test trailing zero invariant factors."""
        M = IntMatrix.from_rows([[1, 2], [2, 4]])
        snf = smith_normal_form(M)
        assert snf.invariant_factors == [1, 0]
        assert snf.rank == 1

    @settings(max_examples=60, deadline=None)
    @given(square_matrices())
    def test_decomposition_properties(self, rows):
        """Test U·M·V = D, divisibility and unimodularity on random input."""
        M = IntMatrix.from_rows(rows)
        snf = smith_normal_form(M)
        assert (snf.U @ M @ snf.V) == snf.D
        assert abs(det_int(snf.U)) == 1
        assert abs(det_int(snf.V)) == 1
        factors = snf.invariant_factors
        assert all(d >= 0 for d in factors)
        for a, b in zip(factors, factors[1:]):
            if a == 0:
                assert b == 0
            else:
                assert b % a == 0
        for i in range(M.rows):
            for j in range(M.cols):
                if i != j:
                    assert snf.D.entries[i][j] == 0


class TestDeterminant:
    """Test cases for the Bareiss determinant."""

    def test_small_values(self):
        """Test determinants of small matrices."""
        assert det_int(IntMatrix.from_rows([[1, 2], [3, 4]])) == -2
        assert det_int(IntMatrix.from_rows([[0, 1], [1, 0]])) == -1
        assert det_int(IntMatrix.identity(0)) == 1

    def test_index_two_matrix(self):
        """Test the exponent matrix with columns (3,-2,2), (1,0,1), (0,0,1)."""
        B = IntMatrix.from_columns([(3, -2, 2), (1, 0, 1), (0, 0, 1)])
        assert det_int(B) == 2

    def test_non_square_rejected(self):
        """Test that non-square input raises."""
        with pytest.raises(LatticeError):
            det_int(IntMatrix.from_rows([[1, 2, 3]]))

    @settings(max_examples=80, deadline=None)
    @given(square_matrices(max_size=5, bound=9))
    def test_matches_sympy(self, rows):
        """Test agreement with sympy's exact determinant."""
        assert det_int(IntMatrix.from_rows(rows)) == int(sympy.Matrix(rows).det())


class TestHermiteNormalForm:
    """Test cases for the row-style Hermite normal form."""

    def test_canonical_form(self):
        """Test the lattice {a ≡ b mod 2}."""
        hnf = hermite_normal_form([[2, 0], [0, 2], [1, 1]], 2)
        assert hnf.to_lists() == [[1, 1], [0, 2]]

    def test_membership(self):
        """Test lattice membership against the HNF."""
        hnf = hermite_normal_form([[2, 0], [0, 2], [1, 1]], 2)
        assert lattice_contains(hnf, (3, 1))
        assert lattice_contains(hnf, (0, 2))
        assert not lattice_contains(hnf, (1, 0))

    def test_zero_rows_dropped(self):
        """Test that the zero lattice has an empty HNF."""
        hnf = hermite_normal_form([[0, 0, 0]], 3)
        assert hnf.rows == 0
        assert hnf.cols == 3


class TestIntegerNullspace:
    """Test cases for integer left kernels."""

    def test_single_column(self):
        """Test the kernel of a1 + a2 − 2 a3 = 0."""
        M = IntMatrix.from_rows([[1], [1], [-2]])
        assert integer_nullspace(M) == [(0, 2, 1), (1, 1, 1)]

    def test_all_ones_skew_matrix(self):
        """Test the one-dimensional kernel of the 3×3 all-ones skew matrix."""
        lam = IntMatrix.from_rows([[0, 1, 1], [-1, 0, 1], [-1, -1, 0]])
        assert integer_nullspace(lam) == [(1, -1, 1)]

    def test_invertible_matrix(self):
        """Test that an invertible matrix has a trivial kernel."""
        assert integer_nullspace(IntMatrix.from_rows([[0, 1], [-1, 0]])) == []

    def test_kernel_vectors_annihilate(self):
        """Test that every returned vector lies in the left kernel."""
        M = IntMatrix.from_rows([[2, 4], [1, 2], [3, 6], [0, 0]])
        basis = integer_nullspace(M)
        assert len(basis) == 3
        for a in basis:
            for j in range(M.cols):
                assert sum(a[i] * M.entries[i][j] for i in range(M.rows)) == 0


class TestInverses:
    """Test cases for integer and rational inverses."""

    def test_unimodular_inverse(self):
        """Test the inverse of an SL2(Z) matrix."""
        B = IntMatrix.from_rows([[2, 1], [1, 1]])
        inverse = unimodular_inverse(B)
        assert inverse.to_lists() == [[1, -1], [-1, 2]]
        assert (B @ inverse) == IntMatrix.identity(2)

    def test_not_unimodular(self):
        """Test that determinant 2 is rejected."""
        with pytest.raises(NotUnimodular):
            unimodular_inverse(IntMatrix.from_rows([[2, 0], [0, 1]]))

    def test_rational_inverse(self):
        """Test Gauss-Jordan inversion over Q."""
        A = [[Fraction(2), Fraction(0)], [Fraction(0), Fraction(4)]]
        assert rational_inverse(A) == [
            [Fraction(1, 2), Fraction(0)],
            [Fraction(0), Fraction(1, 4)],
        ]

    def test_singular_rational_inverse(self):
        """Test that a singular matrix raises."""
        with pytest.raises(LatticeError):
            rational_inverse([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]])


class TestRationalNullspace:
    """Test cases for rational kernels and ranks."""

    def test_free_column_basis(self):
        """Test one basis vector per free column."""
        basis = rational_nullspace([[1, 2, 3]], 3)
        assert basis == [[-2, 1, 0], [-3, 0, 1]]

    def test_rank(self):
        """Test rank over Q."""
        assert rational_rank([[1, 2], [2, 4]]) == 1
        assert rational_rank([[1, 0], [0, Fraction(1, 3)]]) == 2
        assert rational_rank([]) == 0
