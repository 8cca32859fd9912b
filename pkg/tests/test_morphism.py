"""
Unit tests for Poisson morphisms and the classification of monomial
endomorphisms of Poisson tori.
"""

import itertools
import random

from fractions import Fraction
from unittest.mock import patch

import pytest

from poisson_forge.analysis import SimplicityReport
from poisson_forge.bracket import (
    PotentialAffine,
    PotentialQuotient,
    SkewParamMatrix,
    Tensor,
    Torus,
    Weyl,
)
from poisson_forge.lattice import IntMatrix, det_int
from poisson_forge.morphism import (
    Automorphism,
    DixmierAssertionFailure,
    InjectiveNotSurjective,
    MonomialMap,
    MorphismError,
    NotInjective,
    NotPoisson,
    PolyMap,
    aut_bound,
    change_presentation,
    check_poisson_morphism,
    classify_torus_endo,
    injectivity_certificate,
    invariant_factors_of_image,
    missing_generator,
    monomial_compat,
    presentation_condition,
    relative_dixmier_escape,
    simple_torus_dixmier_assert,
)
from poisson_forge.notation import parse_poly
from poisson_forge.poly import LaurentPoly, Scalar

ALL_ONES = SkewParamMatrix.from_rows([[0, 1, 1], [-1, 0, 1], [-1, -1, 0]])
PLANE = SkewParamMatrix.from_rows([[0, 1], [-1, 0]])
INDEX_TWO = [(3, -2, 2), (1, 0, 1), (0, 0, 1)]


class TestMorphismCheck:
    """Test cases for check_poisson_morphism."""

    def test_index_two_torus_map(self):
        """Test the three generator identities of the index-two map."""
        S = Torus(ALL_ONES)
        phi = PolyMap(
            tuple(S.parse(t) for t in ("x1^3*x2^-2*x3^2", "x1*x3", "x3"))
        )
        report = check_poisson_morphism(S, S, phi)
        assert report.passed
        assert [(p.i, p.j) for p in report.pairs] == [(0, 1), (0, 2), (1, 2)]
        assert S.render(report.pairs[0].lhs) == "x1^4*x2^-2*x3^3"
        assert report.relation_image is None

    def test_failing_pair(self):
        """Test that φ(x3) = x3² breaks the (1,3) identity."""
        S = Torus(ALL_ONES)
        phi = PolyMap(
            tuple(S.parse(t) for t in ("x1^3*x2^-2*x3^2", "x1*x3", "x3^2"))
        )
        report = check_poisson_morphism(S, S, phi)
        assert not report.passed
        failure = report.failure
        assert (failure.i, failure.j) == (0, 2)
        assert S.render(failure.lhs) == "x1^3*x2^-2*x3^4"
        assert S.render(failure.rhs) == "2*x1^3*x2^-2*x3^4"

    def test_weyl_into_localisation(self):
        """Test x ↦ x², y ↦ ½x⁻¹y from the Weyl algebra into its localisation."""
        target = Weyl(1, laurent_x=True)
        phi = PolyMap((target.parse("x^2"), target.parse("1/2*x^-1*y")))
        assert check_poisson_morphism(Weyl(1), target, phi).passed

    def test_quotient_relation_image(self):
        """Test that the identity of a quotient maps its relation to zero."""
        omega = parse_poly("x^3 + y^3 + z^3", ("x", "y", "z"))
        S = PotentialQuotient(omega, Scalar(1))
        phi = PolyMap(tuple(S.variable(i) for i in range(3)))
        report = check_poisson_morphism(S, S, phi)
        assert report.passed
        assert report.relation_image.is_zero()

    def test_quotient_relation_not_preserved(self):
        """Test that the identity A_Ω → A_Ω/(Ω − 1) is fine but not conversely."""
        omega = parse_poly("x^3 + y^3 + z^3", ("x", "y", "z"))
        Q1 = PotentialQuotient(omega, Scalar(1))
        Q2 = PotentialQuotient(omega, Scalar(2))
        phi = PolyMap(tuple(Q1.variable(i) for i in range(3)))
        assert check_poisson_morphism(PotentialAffine(omega), Q1, phi).passed
        report = check_poisson_morphism(Q1, Q2, phi)
        assert not report.passed
        assert report.relation_image == LaurentPoly.one(3)

    def test_context_mismatch(self):
        """Test the image-count check."""
        S = Torus(ALL_ONES)
        with pytest.raises(MorphismError):
            check_poisson_morphism(S, S, PolyMap((S.variable(0),)))

    def test_mixed_contexts_rejected(self):
        """Test that images must share a context."""
        with pytest.raises(MorphismError):
            PolyMap((LaurentPoly.variable(2, 0), LaurentPoly.variable(3, 0)))


class TestTorusClassification:
    """Test cases for classify_torus_endo."""

    def test_compatibility_criterion(self):
        """Test BᵀΛB = Λ on the index-two matrix."""
        B = IntMatrix.from_columns(INDEX_TWO)
        assert monomial_compat(ALL_ONES, B).passed

    def test_injective_not_surjective(self):
        """Test the index-two endomorphism misses x2."""
        result = classify_torus_endo(ALL_ONES, MonomialMap.from_columns(INDEX_TWO))
        assert isinstance(result, InjectiveNotSurjective)
        assert result.label == "injective_not_surjective"
        assert result.lattice_index == 2
        assert result.missing_generator == (0, 1, 0)

    def test_not_poisson(self):
        """Test the identity failure for a doubled third column."""
        phi = MonomialMap.from_columns([(3, -2, 2), (1, 0, 1), (0, 0, 2)])
        result = classify_torus_endo(ALL_ONES, phi)
        assert isinstance(result, NotPoisson)
        assert result.pair == (0, 2)
        assert result.lhs == LaurentPoly.monomial((3, -2, 4))
        assert result.rhs == LaurentPoly.monomial((3, -2, 4), 2)

    def test_not_injective(self):
        """Test a compatible singular matrix built from the central exponent."""
        phi = MonomialMap.from_columns([(0, 1, -1), (0, 1, 0), (0, 0, 1)])
        result = classify_torus_endo(ALL_ONES, phi)
        assert isinstance(result, NotInjective)
        assert result.kernel_exponent == (1, -1, 1)

    def test_automorphism_with_coefficients(self):
        """Test the verified inverse of an SL2 map with scalars 2 and 3."""
        phi = MonomialMap.from_columns([(1, 0), (1, 1)], [2, 3])
        result = classify_torus_endo(PLANE, phi)
        assert isinstance(result, Automorphism)
        assert result.inverse.B.to_lists() == [[1, -1], [0, 1]]
        assert result.inverse.c == (Fraction(1, 2), Fraction(2, 3))

    def test_missing_generator_none_for_unimodular(self):
        """Test that a unimodular lattice misses nothing."""
        assert missing_generator(IntMatrix.identity(3)) is None

    def test_monomial_map_validation(self):
        """Test shape and coefficient checks."""
        with pytest.raises(MorphismError):
            MonomialMap.from_columns([(1, 0), (0, 1)], [1, 0])
        with pytest.raises(MorphismError):
            MonomialMap.from_columns([(1, 0), (0, 1)], [1])
        with pytest.raises(MorphismError):
            MonomialMap(IntMatrix.from_rows([[1, 0, 0], [0, 1, 0]]), (1, 1, 1))


SL2_LETTERS = (((0, -1), (1, 0)), ((1, 1), (0, 1)), ((1, -1), (0, 1)))


def sl2_word(rng: random.Random, length: int) -> IntMatrix:
    """Product of random S, T and T⁻¹ letters."""
    M = IntMatrix.identity(2)
    for _ in range(length):
        M = M @ IntMatrix.from_rows(rng.choice(SL2_LETTERS))
    return M


def random_coefficients(rng: random.Random, n: int) -> list[Fraction]:
    return [
        Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 4))
        for _ in range(n)
    ]


def random_skew(rng: random.Random, n: int) -> SkewParamMatrix:
    rows = [[0] * n for _ in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        rows[i][j] = rng.randint(-2, 2)
        rows[j][i] = -rows[i][j]
    return SkewParamMatrix.from_rows(rows)


class TestRandomMonomialMaps:
    """Seeded sweeps of monomial maps of tori."""

    def test_sl2_words_are_automorphisms(self):
        """Test 200 SL2 words: class, determinant and two-sided inverse."""
        rng = random.Random(2024)
        for _ in range(200):
            B = sl2_word(rng, rng.randint(1, 8))
            assert det_int(B) == 1
            phi = MonomialMap(B, tuple(random_coefficients(rng, 2)))
            result = classify_torus_endo(PLANE, phi)
            assert isinstance(result, Automorphism)
            forward, backward = phi.to_poly_map(), result.inverse.to_poly_map()
            for k in range(2):
                x_k = LaurentPoly.variable(2, k)
                assert backward.apply(forward.images[k]) == x_k
                assert forward.apply(backward.images[k]) == x_k

    def test_determinant_two_is_incompatible(self):
        """Test 200 det-2 matrices: BᵀΛB = 2Λ never equals Λ."""
        rng = random.Random(2025)
        double = IntMatrix.from_rows([[2, 0], [0, 1]])
        for _ in range(200):
            B = sl2_word(rng, rng.randint(0, 6)) @ double @ sl2_word(rng, 3)
            assert det_int(B) == 2
            assert not monomial_compat(PLANE, B).passed
            phi = MonomialMap(B, tuple(random_coefficients(rng, 2)))
            assert isinstance(classify_torus_endo(PLANE, phi), NotPoisson)

    @pytest.mark.parametrize("seed", range(4))
    def test_generic_check_agrees_with_matrix_criterion(self, seed):
        """Test that pairwise bracket identities match BᵀΛB = Λ on 3×3 maps."""
        rng = random.Random(seed)
        zero = SkewParamMatrix.from_rows([[0] * 3 for _ in range(3)])
        verdicts = set()
        for _ in range(25):
            lam = rng.choice([ALL_ONES, zero, random_skew(rng, 3)])
            B = IntMatrix.from_rows(
                [[rng.randint(-1, 2) for _ in range(3)] for _ in range(3)]
            )
            phi = MonomialMap(B, tuple(random_coefficients(rng, 3)))
            S = Torus(lam)
            generic = check_poisson_morphism(S, S, phi.to_poly_map()).passed
            assert generic == monomial_compat(lam, B).passed
            verdicts.add(generic)
        assert verdicts == {True, False}


class TestDixmierAssertion:
    """Test cases for simple_torus_dixmier_assert."""

    def test_holds_for_sl2(self):
        """Test a compatible unimodular map on the plane torus."""
        report = simple_torus_dixmier_assert(
            PLANE, IntMatrix.from_rows([[2, 1], [1, 1]])
        )
        assert report.status == "holds"
        assert report.det == 1

    def test_not_simple(self):
        """Test that non-simple tori are out of scope."""
        B = IntMatrix.from_columns(INDEX_TWO)
        report = simple_torus_dixmier_assert(ALL_ONES, B)
        assert report.status == "not-applicable"
        assert "not Poisson simple" in report.reason

    def test_incompatible(self):
        """Test that incompatible matrices are out of scope."""
        B = IntMatrix.from_rows([[2, 0], [0, 1]])
        report = simple_torus_dixmier_assert(PLANE, B)
        assert report.status == "not-applicable"
        assert "not compatible" in report.reason

    def test_exhaustive_small_matrices(self):
        """Test every 2×2 matrix with entries in [−2, 2] on the plane torus."""
        statuses = set()
        for a, b, c, d in itertools.product(range(-2, 3), repeat=4):
            report = simple_torus_dixmier_assert(
                PLANE, IntMatrix.from_rows([[a, b], [c, d]])
            )
            statuses.add(report.status)
            if report.status == "holds":
                assert a * d - b * c == 1
        assert statuses == {"holds", "not-applicable"}

    def test_failure_raised(self):
        """Test the assertion path with a forced simplicity verdict."""
        forced = SimplicityReport(True, None, "rank")
        with patch(
            "poisson_forge.morphism.is_poisson_simple_torus", return_value=forced
        ):
            with pytest.raises(DixmierAssertionFailure, match="determinant 2"):
                simple_torus_dixmier_assert(
                    ALL_ONES, IntMatrix.from_columns(INDEX_TWO)
                )


class TestCertificatesAndPresentations:
    """Test cases for Jacobian certificates, presentations and bounds."""

    def test_weyl_certificate(self):
        """Test that the localised Weyl map has Jacobian 1."""
        S = Weyl(1, laurent_x=True)
        report = injectivity_certificate(
            PolyMap((S.parse("x^2"), S.parse("1/2*x^-1*y")))
        )
        assert report.certified
        assert report.jacobian == LaurentPoly.one(2)
        assert report.columns == (0, 1)

    def test_degenerate_certificate(self):
        """Test that dependent images are not certified."""
        x = LaurentPoly.variable(2, 0)
        assert not injectivity_certificate(PolyMap((x, x * 2))).certified
        assert not injectivity_certificate(PolyMap((x, x, x))).certified

    def test_aut_bound(self):
        """Test 42·d·(d − 3)²."""
        assert aut_bound(3) == 0
        assert aut_bound(5) == 840
        assert aut_bound(6) == 2268
        with pytest.raises(MorphismError):
            aut_bound(2)

    def test_change_presentation(self):
        """Test CᵀΛC on the plane torus for an SL2 change of basis."""
        C = IntMatrix.from_rows([[1, 1], [0, 1]])
        assert change_presentation(PLANE, C) == PLANE
        assert change_presentation(PLANE, IntMatrix.from_rows([[2, 0], [0, 1]])) == (
            SkewParamMatrix.from_rows([[0, 2], [-2, 0]])
        )

    def test_invariant_factors_of_image(self):
        """Test the factors 1, 1, 2 of the index-two lattice."""
        B = IntMatrix.from_columns(INDEX_TWO)
        assert invariant_factors_of_image(B) == [1, 1, 2]

    def test_presentation_condition(self):
        """Test the condition for trivial and non-trivial factors."""
        G = IntMatrix.identity(2)
        report = presentation_condition(PLANE, G, [1, 1])
        assert report.holds
        assert report.det_m == 1
        assert report.forces_unimodular
        failing = presentation_condition(PLANE, G, [1, 2])
        assert not failing.holds
        assert failing.failing == (0, 1)
        assert failing.factor_product == 2
        with pytest.raises(MorphismError):
            presentation_condition(PLANE, G, [1, 0])

    def test_relative_escape(self):
        """Test a map into a tensor product that escapes the base block."""
        base = Torus(PLANE)
        target = Tensor((base, Torus(SkewParamMatrix.from_rows([[0]]))))
        assert target.names == ("x1_1", "x2_1", "x1_2")
        phi = PolyMap((target.parse("x1_1*x1_2"), target.parse("x2_1*x1_2")))
        assert check_poisson_morphism(base, target, phi).passed
        report = relative_dixmier_escape(phi, 2)
        assert report.escapes
        assert report.generators == (0, 1)
        identity = PolyMap((target.variable(0), target.variable(1)))
        assert not relative_dixmier_escape(identity, 2).escapes
