"""
Poisson-Forge

Exact-arithmetic construction and verification of Poisson algebras: tori,
potential algebras and their quotients, Weyl algebras and tensor products.
Brackets, simplicity, monomial endomorphism classification, isolated
singularities, grading and valuation checks, and cofinite subalgebras.
"""

from .analysis import (
    SimplicityReport,
    is_poisson_simple_torus,
    monomial_center_basis,
    truncated_center,
)
from .bracket import (
    GeneratorTable,
    PoissonStructure,
    PotentialAffine,
    PotentialQuotient,
    SkewParamMatrix,
    SkewPoly,
    StructureError,
    Tensor,
    Torus,
    Weyl,
    bracket,
    generator_bracket_table,
    normal_form_mod,
    omega_centrality,
    verify_poisson_axioms,
)
from .config import (
    ConfigError,
    ForgeConfig,
    active_config,
    default_config,
    load_config,
    use_config,
)
from .graded import (
    SubalgebraAd,
    WeightValuation,
    associated_graded_bracket_check,
    bounded_poisson_closure,
    bracket_degree_shift,
    check_Ad_closure,
    check_w_valuation,
    construct_Adzeta,
    zeta_image_check,
)
from .groebner import (
    GroebnerBasis,
    groebner_basis,
    is_isolated_singularity,
    normal_form,
    quotient_dimension,
    standard_monomials,
)
from .lattice import (
    IntMatrix,
    det_int,
    hermite_normal_form,
    integer_nullspace,
    smith_normal_form,
    unimodular_inverse,
)
from .morphism import (
    MonomialMap,
    PolyMap,
    aut_bound,
    change_presentation,
    check_poisson_morphism,
    classify_torus_endo,
    injectivity_certificate,
    invariant_factors_of_image,
    monomial_compat,
    presentation_condition,
    relative_dixmier_escape,
    simple_torus_dixmier_assert,
)
from .notation import parse_poly, render_poly
from .pipeline import Report, run_problem
from .poly import GREVLEX, LaurentPoly, MonomialOrder, Scalar
from .schema import SchemaError, parse_structure

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "ForgeConfig",
    "GREVLEX",
    "GeneratorTable",
    "GroebnerBasis",
    "IntMatrix",
    "LaurentPoly",
    "MonomialMap",
    "MonomialOrder",
    "PoissonStructure",
    "PolyMap",
    "PotentialAffine",
    "PotentialQuotient",
    "Report",
    "Scalar",
    "SchemaError",
    "SimplicityReport",
    "SkewParamMatrix",
    "SkewPoly",
    "StructureError",
    "SubalgebraAd",
    "Tensor",
    "Torus",
    "WeightValuation",
    "Weyl",
    "active_config",
    "associated_graded_bracket_check",
    "aut_bound",
    "bounded_poisson_closure",
    "bracket",
    "bracket_degree_shift",
    "change_presentation",
    "check_Ad_closure",
    "check_poisson_morphism",
    "check_w_valuation",
    "classify_torus_endo",
    "construct_Adzeta",
    "default_config",
    "det_int",
    "generator_bracket_table",
    "groebner_basis",
    "hermite_normal_form",
    "injectivity_certificate",
    "integer_nullspace",
    "invariant_factors_of_image",
    "is_isolated_singularity",
    "is_poisson_simple_torus",
    "load_config",
    "monomial_center_basis",
    "monomial_compat",
    "normal_form",
    "normal_form_mod",
    "omega_centrality",
    "parse_poly",
    "parse_structure",
    "presentation_condition",
    "quotient_dimension",
    "relative_dixmier_escape",
    "render_poly",
    "run_problem",
    "simple_torus_dixmier_assert",
    "smith_normal_form",
    "standard_monomials",
    "truncated_center",
    "unimodular_inverse",
    "use_config",
    "verify_poisson_axioms",
    "zeta_image_check",
]
