"""
Unit tests for scalars, monomial orders and sparse Laurent polynomials.
"""

from fractions import Fraction

import pytest

from hypothesis import given, settings
from hypothesis import strategies as st

from poisson_forge.poly import (
    GREVLEX,
    ArityMismatch,
    LaurentPoly,
    MonomialOrder,
    NegativePowerOfNonUnit,
    ParameterProductError,
    PolyError,
    Scalar,
    adams_components,
    monomials_up_to,
    order_from_name,
    partial_derivative,
    substitute,
)


def x(i: int, arity: int = 3) -> LaurentPoly:
    return LaurentPoly.variable(arity, i)


laurent_polys = st.dictionaries(
    st.tuples(
        st.integers(min_value=-2, max_value=2), st.integers(min_value=-2, max_value=2)
    ),
    st.integers(min_value=-5, max_value=5),
    max_size=4,
).map(lambda terms: LaurentPoly(2, terms))


unit_monomials = st.tuples(
    st.integers(min_value=-2, max_value=2),
    st.integers(min_value=-2, max_value=2),
    st.sampled_from([-2, -1, 1, 3]),
).map(lambda t: LaurentPoly.monomial((t[0], t[1]), t[2]))

polynomials = st.dictionaries(
    st.tuples(
        st.integers(min_value=0, max_value=2), st.integers(min_value=0, max_value=2)
    ),
    st.integers(min_value=-5, max_value=5),
    max_size=3,
).map(lambda terms: LaurentPoly(2, terms))


class TestScalar:
    """Test cases for parameter-linear scalars."""

    def test_constant_arithmetic(self):
        """Test exact rational arithmetic on constants."""
        a = Scalar(Fraction(1, 2))
        assert a + a == 1
        assert a * 4 == 2
        assert (a - 1) == Fraction(-1, 2)
        assert Scalar(3) / 6 == Fraction(1, 2)

    def test_parameter_linear_combination(self):
        """Test that parameters combine linearly."""
        q = Scalar.parameter("q")
        s = q * 2 + 1 - q
        assert s.coefficient("q") == 1
        assert s.constant == 1
        assert s.parameters == ("q",)
        assert s.components() == {"": 1, "q": 1}

    def test_parameter_cancellation(self):
        """Test that q − q is the zero scalar."""
        q = Scalar.parameter("q")
        assert (q - q).is_zero()
        assert not (q - q)

    def test_parameter_product_rejected(self):
        """Test that products of two parameter-dependent scalars raise."""
        with pytest.raises(ParameterProductError):
            Scalar.parameter("q") * Scalar.parameter("p")

    def test_to_fraction_with_parameters(self):
        """Test that parameters cannot be coerced to a fraction."""
        with pytest.raises(PolyError):
            Scalar.parameter("q").to_fraction()

    def test_division_by_zero(self):
        """Test scalar division by zero."""
        with pytest.raises(ZeroDivisionError):
            Scalar(1) / 0

    def test_hash_consistent_with_equality(self):
        """Test that equal scalars hash equally."""
        assert hash(Scalar(2)) == hash(Scalar(Fraction(4, 2)))
        assert {Scalar.parameter("q"), Scalar(0, {"q": 1})} == {Scalar.parameter("q")}


class TestMonomialOrder:
    """Test cases for monomial term orders."""

    def test_grevlex_degree_two(self):
        """Test the standard grevlex ordering of quadratic monomials."""
        layer = monomials_up_to(3, 2, min_degree=2)
        assert layer == [
            (2, 0, 0),
            (1, 1, 0),
            (0, 2, 0),
            (1, 0, 1),
            (0, 1, 1),
            (0, 0, 2),
        ]

    def test_lex_prefers_first_variable(self):
        """Test that lex puts x1 above any power of x2."""
        lex = order_from_name("lex")
        assert lex.greater((1, 0), (0, 5))
        assert not GREVLEX.greater((1, 0), (0, 5))

    def test_grlex_differs_from_grevlex(self):
        """Test the classic grlex/grevlex disagreement in degree three."""
        a, b = (1, 0, 2), (0, 2, 0)
        grlex = MonomialOrder("grlex")
        assert grlex.greater(a, b) or grlex.greater(b, a)
        a, b = (1, 0, 2), (0, 3, 0)
        assert grlex.greater(a, b)
        assert GREVLEX.greater(b, a)

    def test_precedence_permutation(self):
        """Test a custom variable precedence."""
        order = MonomialOrder("lex", (1, 0))
        assert order.greater((0, 1), (5, 0))

    def test_invalid_order(self):
        """Test unknown kinds and bad precedences."""
        with pytest.raises(PolyError):
            MonomialOrder("revlex")
        with pytest.raises(PolyError):
            MonomialOrder("lex", (0, 0))


class TestLaurentPoly:
    """Test cases for sparse Laurent polynomials."""

    def test_canonical_form_drops_zeros(self):
        """Test that zero coefficients are never stored."""
        f = LaurentPoly(2, {(1, 0): 1, (0, 1): 0})
        assert len(f) == 1
        assert (x(0) - x(0)).is_zero()

    def test_arity_mismatch(self):
        """Test that arithmetic across contexts raises."""
        with pytest.raises(ArityMismatch):
            x(0, 2) + x(0, 3)
        with pytest.raises(ArityMismatch):
            LaurentPoly(2, {(1, 0, 0): 1})

    def test_arity_limit(self):
        """Test that arities beyond the configured maximum are rejected."""
        with pytest.raises(PolyError):
            LaurentPoly.zero(17)

    def test_multiplication_and_powers(self):
        """Test products and nonnegative powers."""
        f = x(0) + x(1)
        assert f**2 == x(0) ** 2 + x(0) * x(1) * 2 + x(1) ** 2
        assert f**0 == LaurentPoly.one(3)

    def test_negative_power_of_monomial(self):
        """Test inverses of unit monomials."""
        f = LaurentPoly.monomial((2, -1, 0), 4)
        assert f**-1 == LaurentPoly.monomial((-2, 1, 0), Fraction(1, 4))
        assert f * f**-1 == LaurentPoly.one(3)

    def test_negative_power_of_non_unit(self):
        """Test that sums have no inverse."""
        with pytest.raises(NegativePowerOfNonUnit):
            (x(0) + 1) ** -1

    def test_degrees_and_top_form(self):
        """Test Adams degree helpers."""
        f = x(0) ** 3 + x(1) * x(2) + 1
        assert f.degree() == 3
        assert f.min_degree() == 0
        assert not f.is_homogeneous()
        assert f.top_form() == x(0) ** 3
        assert LaurentPoly.zero(3).degree() is None

    def test_leading_term(self):
        """Test the grevlex leading term."""
        f = x(0) * x(2) + x(1) ** 2 * 3
        exponent, c = f.leading_term()
        assert exponent == (0, 2, 0)
        assert c == 3
        with pytest.raises(PolyError):
            LaurentPoly.zero(3).leading_term()

    def test_parameters(self):
        """Test parameter bookkeeping in coefficients."""
        f = x(0).scale(Scalar.parameter("q")) + x(1)
        assert f.parameters() == ("q",)
        assert not f.is_parameter_free()
        assert not f.is_unit_monomial()

    def test_map_exponents(self):
        """Test embedding into a larger variable context."""
        f = LaurentPoly(2, {(1, -1): 2})
        assert f.map_exponents(4, 2) == LaurentPoly(4, {(0, 0, 1, -1): 2})

    @settings(max_examples=50, deadline=None)
    @given(laurent_polys, laurent_polys, laurent_polys)
    def test_ring_axioms(self, f, g, h):
        """Test commutativity, associativity and distributivity."""
        assert f + g == g + f
        assert f * g == g * f
        assert (f * g) * h == f * (g * h)
        assert f * (g + h) == f * g + f * h
        assert f - f == LaurentPoly.zero(2)


class TestPolynomialOperations:
    """Test cases for derivatives, substitution and grading helpers."""

    def test_partial_derivative_laurent(self):
        """Test d/dx of x^-2."""
        f = LaurentPoly(2, {(-2, 1): 1})
        assert partial_derivative(f, 0) == LaurentPoly(2, {(-3, 1): -2})
        assert partial_derivative(f, 1) == LaurentPoly(2, {(-2, 0): 1})

    def test_partial_derivative_index(self):
        """Test that indices outside the context raise."""
        with pytest.raises(PolyError):
            partial_derivative(x(0), 3)

    def test_substitute(self):
        """Test evaluation of a monomial map."""
        f = LaurentPoly(2, {(1, -1): 1, (0, 0): 5})
        images = [x(0, 2) ** 2, x(0, 2) * x(1, 2)]
        assert substitute(f, images) == LaurentPoly(2, {(1, -1): 1, (0, 0): 5})

    def test_substitute_non_unit_negative_power(self):
        """Test that x^-1 cannot be sent to a sum."""
        f = LaurentPoly(1, {(-1,): 1})
        with pytest.raises(NegativePowerOfNonUnit):
            substitute(f, [LaurentPoly(1, {(1,): 1, (0,): 1})])

    def test_substitute_wrong_image_count(self):
        """Test the image count check."""
        with pytest.raises(ArityMismatch):
            substitute(x(0), [x(0)])

    def test_adams_components(self):
        """Test splitting by total degree."""
        f = x(0) ** 2 + x(1) + 7
        parts = adams_components(f)
        assert list(parts) == [0, 1, 2]
        assert parts[2] == x(0) ** 2

    def test_monomials_up_to(self):
        """Test enumeration order of low-degree monomials."""
        assert monomials_up_to(3, 1) == [
            (0, 0, 0),
            (1, 0, 0),
            (0, 1, 0),
            (0, 0, 1),
        ]
        assert len(monomials_up_to(3, 5)) == 56

    @settings(max_examples=50, deadline=None)
    @given(laurent_polys, laurent_polys, unit_monomials, unit_monomials)
    def test_substitute_is_a_ring_map(self, f, g, a, b):
        """Test additivity and multiplicativity under monomial images."""
        images = [a, b]
        sf, sg = substitute(f, images), substitute(g, images)
        assert substitute(f + g, images) == sf + sg
        assert substitute(f * g, images) == sf * sg

    @settings(max_examples=50, deadline=None)
    @given(polynomials, polynomials, polynomials, polynomials)
    def test_substitute_polynomial_images(self, f, g, a, b):
        """Test the ring map property for arbitrary polynomial images."""
        images = [a, b]
        sf, sg = substitute(f, images, 2), substitute(g, images, 2)
        assert substitute(f + g, images, 2) == sf + sg
        assert substitute(f * g, images, 2) == sf * sg

    @settings(max_examples=50, deadline=None)
    @given(laurent_polys, laurent_polys, st.sampled_from([0, 1]))
    def test_partial_derivative_leibniz(self, f, g, i):
        """Test ∂(fg) = ∂f·g + f·∂g."""
        df, dg = partial_derivative(f, i), partial_derivative(g, i)
        assert partial_derivative(f * g, i) == df * g + f * dg

    @settings(max_examples=50, deadline=None)
    @given(laurent_polys, laurent_polys)
    def test_adams_degrees_add(self, f, g):
        """Test that a product of components of degrees a and b has degree a+b."""
        for a, f_a in adams_components(f).items():
            for b, g_b in adams_components(g).items():
                product = f_a * g_b
                if not product.is_zero():
                    assert adams_components(product) == {a + b: product}
        assert sum(adams_components(f).values(), LaurentPoly.zero(2)) == f
