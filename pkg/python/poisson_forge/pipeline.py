"""
Poisson-Forge Problem Pipeline

This module runs one problem descriptor through validation, structure
construction and command dispatch, and produces a deterministic report.

Features:
- Pipeline Stages:
  • Stage 1: Descriptor and operand validation
  • Stage 2: Structure construction
  • Stage 3: Command dispatch to the library
- Reports:
  • Status pass | fail | not-applicable | value | error
  • Polynomials rendered canonically in the structure's variable names
  • Byte-deterministic JSON (sorted keys, fixed indentation)
- Settings:
  • Explicit overrides beat descriptor options, which beat config defaults

Use Cases:
- Back the command-line front end
- Drive golden fixture tests without spawning processes
"""

import json
import logging

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Mapping, Optional, Union

from .analysis import is_poisson_simple_torus, monomial_center_basis, truncated_center
from .bracket import (
    PoissonStructure,
    PotentialAffine,
    PotentialQuotient,
    StructureError,
    Torus,
    omega_centrality,
    verify_poisson_axioms,
)
from .config import ConfigError, ForgeConfig, active_config, use_config
from .graded import (
    DegreeViolation,
    GradedError,
    WeightValuation,
    ZetaSquareEscapes,
    associated_graded_bracket_check,
    bounded_poisson_closure,
    bracket_degree_shift,
    check_Ad_closure,
    check_w_valuation,
    construct_Adzeta,
    zeta_image_check,
)
from .groebner import GroebnerError, groebner_basis, is_isolated_singularity
from .lattice import LatticeError, det_int
from .morphism import (
    Automorphism,
    DixmierAssertionFailure,
    InjectiveNotSurjective,
    MonomialMap,
    MorphismError,
    NotInjective,
    NotPoisson,
    PolyMap,
    aut_bound,
    check_poisson_morphism,
    classify_torus_endo,
    injectivity_certificate,
    invariant_factors_of_image,
    relative_dixmier_escape,
    simple_torus_dixmier_assert,
)
from .notation import NotationError, parse_scalar, render_poly, render_scalar
from .poly import ExponentVector, LaurentPoly, PolyError, order_from_name
from .schema import (
    MonomialMapOperands,
    ProblemDescriptor,
    SchemaError,
    build_structure,
    load_descriptor,
    load_operands,
    polynomial,
)


logger = logging.getLogger(__name__)

EXIT_CODES = {"pass": 0, "value": 0, "not-applicable": 0, "fail": 1, "error": 2}

_INPUT_ERRORS = (
    SchemaError,
    NotationError,
    PolyError,
    StructureError,
    MorphismError,
    GroebnerError,
    GradedError,
    LatticeError,
    ConfigError,
)


class ProblemPipelineError(Exception):
    """Raised when a descriptor cannot be validated or dispatched."""

    pass


@dataclass(frozen=True)
class Report:
    status: str
    payload: dict[str, Any] = field(default_factory=dict)
    diagnostics: list[str] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def to_dict(self) -> dict[str, Any]:
        return {
            "status": self.status,
            "payload": self.payload,
            "diagnostics": list(self.diagnostics),
        }

    def to_json(self, indent: Optional[int] = None) -> str:
        if indent is None:
            indent = active_config().indent
        return json.dumps(self.to_dict(), sort_keys=True, indent=indent)


@dataclass(frozen=True)
class Settings:
    degree_bound: int
    trials: int
    seed: int
    order: str


@dataclass(frozen=True)
class _Context:
    descriptor: ProblemDescriptor
    structure: Optional[PoissonStructure]
    operands: Any
    settings: Settings

    @property
    def S(self) -> PoissonStructure:
        if self.structure is None:
            raise SchemaError(
                f"Command '{self.descriptor.command}' needs a structure",
                "$.structure",
            )
        return self.structure


def resolve_settings(
    descriptor: ProblemDescriptor,
    overrides: Optional[Mapping[str, Any]] = None,
    config: Optional[ForgeConfig] = None,
) -> Settings:
    config = config or active_config()
    options = descriptor.options
    values = {
        "degree_bound": config.degree_bound,
        "trials": config.trials,
        "seed": config.seed,
        "order": config.order,
    }
    for key in values:
        if getattr(options, key) is not None:
            values[key] = getattr(options, key)
        if overrides and overrides.get(key) is not None:
            values[key] = overrides[key]
    return Settings(**values)


def _monomial(exponent: ExponentVector, S: PoissonStructure) -> str:
    return render_poly(LaurentPoly.monomial(exponent), S.names)


def _parse_in(S: PoissonStructure, text: str, path: str) -> LaurentPoly:
    f = polynomial(text, S.names, S.parameters, path)
    S.check(f)
    return S.reduce(f)


def _parse_images(
    T: PoissonStructure, images: list[str], arity: int, path: str
) -> PolyMap:
    if len(images) != arity:
        raise SchemaError(f"Expected {arity} images, got {len(images)}", path)
    return PolyMap(
        tuple(_parse_in(T, text, f"{path}[{k}]") for k, text in enumerate(images))
    )


def _torus(ctx: _Context) -> Torus:
    S = ctx.S
    if S.kind != "torus":
        raise SchemaError(
            f"Command '{ctx.descriptor.command}' needs a torus, got {S.kind}",
            "$.structure.kind",
        )
    return S  # type: ignore[return-value]


def _potential(ctx: _Context) -> PotentialAffine:
    S = ctx.S
    if not isinstance(S, PotentialAffine):
        raise SchemaError(
            f"Command '{ctx.descriptor.command}' needs a potential, got {S.kind}",
            "$.structure.kind",
        )
    return S


def _monomial_map(ctx: _Context, S: Torus) -> MonomialMap:
    ops: MonomialMapOperands = ctx.operands
    n = S.arity
    columns: list[ExponentVector] = []
    coefficients: list[Fraction] = []
    if ops.images is not None:
        for k, text in enumerate(ops.images):
            path = f"$.operands.images[{k}]"
            image = polynomial(text, S.names, (), path)
            if len(image) != 1:
                raise SchemaError("Image is not a single monomial", path)
            exponent, c = next(image.items())
            columns.append(exponent)
            coefficients.append(c.to_fraction())
        if len(columns) != n:
            raise SchemaError(
                f"Expected {n} images, got {len(columns)}", "$.operands.images"
            )
        return MonomialMap.from_columns(columns, coefficients)

    columns = [tuple(col) for col in ops.columns or []]
    if len(columns) != n or any(len(col) != n for col in columns):
        raise SchemaError(f"Expected {n} columns of length {n}", "$.operands.columns")
    if ops.coefficients is None:
        return MonomialMap.from_columns(columns)
    if len(ops.coefficients) != n:
        raise SchemaError(f"Expected {n} coefficients", "$.operands.coefficients")
    for k, value in enumerate(ops.coefficients):
        scalar = parse_scalar(value, ())
        if not scalar.is_constant():
            raise SchemaError(
                "Coefficient must be a number", f"$.operands.coefficients[{k}]"
            )
        coefficients.append(scalar.to_fraction())
    return MonomialMap.from_columns(columns, coefficients)


def _run_bracket(ctx: _Context) -> Report:
    S = ctx.S
    f = _parse_in(S, ctx.operands.f, "$.operands.f")
    g = _parse_in(S, ctx.operands.g, "$.operands.g")
    return Report("value", {"value": S.render(S.bracket(f, g))})


def _run_simple(ctx: _Context) -> Report:
    S = ctx.S
    if S.kind == "skew":
        return Report(
            "not-applicable",
            {},
            ["Simplicity is decided for tori; use kind 'torus' with the same lambda"],
        )
    report = is_poisson_simple_torus(_torus(ctx).lam)
    if report.witness is None:
        return Report("pass", {"simple": True, "method": report.method})
    witness = _monomial(report.witness, S)
    return Report(
        "fail",
        {"simple": False, "method": report.method, "witness": witness},
        [f"{witness} is Poisson central"],
    )


def _run_center(ctx: _Context) -> Report:
    S = ctx.S
    if S.kind == "torus":
        basis = monomial_center_basis(_torus(ctx).lam)
        return Report(
            "value",
            {"lattice_basis": [_monomial(e, S) for e in basis], "rank": len(basis)},
        )
    bound = ctx.settings.degree_bound
    center = truncated_center(S, bound)
    return Report(
        "value", {"degree_bound": bound, "basis": [S.render(f) for f in center]}
    )


def _run_morphism_check(ctx: _Context) -> Report:
    S = ctx.S
    ops = ctx.operands
    T = (
        build_structure(ops.target, "$.operands.target")
        if ops.target is not None
        else S
    )
    phi = _parse_images(T, ops.images, S.arity, "$.operands.images")
    report = check_poisson_morphism(S, T, phi)
    payload: dict[str, Any] = {
        "pairs": [
            {
                "pair": [p.i + 1, p.j + 1],
                "lhs": T.render(p.lhs),
                "rhs": T.render(p.rhs),
                "holds": p.holds,
            }
            for p in report.pairs
        ]
    }
    if report.relation_image is not None:
        payload["relation_image"] = T.render(report.relation_image)
    if ops.base_arity is not None:
        escape = relative_dixmier_escape(phi, ops.base_arity)
        payload["escape"] = {
            "escapes": escape.escapes,
            "generators": [i + 1 for i in escape.generators],
        }
    if report.passed:
        return Report("pass", payload)
    diagnostics = []
    if report.failure is not None:
        i, j = report.failure.i + 1, report.failure.j + 1
        diagnostics.append(f"Bracket of generators {i} and {j} is not preserved")
    if report.relation_image is not None and not report.relation_image.is_zero():
        diagnostics.append("Image of the defining relation is nonzero")
    return Report("fail", payload, diagnostics)


def _run_classify(ctx: _Context) -> Report:
    S = _torus(ctx)
    result = classify_torus_endo(S.lam, _monomial_map(ctx, S))
    payload: dict[str, Any] = {"class": result.label}
    if isinstance(result, NotPoisson):
        payload.update(
            pair=[result.pair[0] + 1, result.pair[1] + 1],
            lhs=S.render(result.lhs),
            rhs=S.render(result.rhs),
        )
    elif isinstance(result, NotInjective):
        payload["kernel"] = _monomial(result.kernel_exponent, S)
    elif isinstance(result, Automorphism):
        payload["inverse"] = [S.render(f) for f in result.inverse.to_poly_map().images]
    elif isinstance(result, InjectiveNotSurjective):
        payload.update(
            index=result.lattice_index,
            missing=_monomial(result.missing_generator, S),
        )
    return Report("value", payload)


def _run_dixmier_assert(ctx: _Context) -> Report:
    S = _torus(ctx)
    B = _monomial_map(ctx, S).B
    factors = invariant_factors_of_image(B)
    try:
        report = simple_torus_dixmier_assert(S.lam, B)
    except DixmierAssertionFailure as e:
        return Report(
            "fail", {"det": det_int(B), "invariant_factors": factors}, [str(e)]
        )
    if report.status == "not-applicable":
        return Report("not-applicable", {"reason": report.reason})
    return Report(
        "pass",
        {"det": report.det, "invariant_factors": factors, "reason": report.reason},
    )


def _run_singular(ctx: _Context) -> Report:
    S = _potential(ctx)
    report = is_isolated_singularity(S.omega, order_from_name(ctx.settings.order))
    payload = {"isolated": report.isolated, "dimension": report.dimension}
    if report.isolated:
        return Report("pass", payload)
    return Report("fail", payload, ["Jacobian quotient is infinite-dimensional"])


def _run_grading(ctx: _Context) -> Report:
    report = bracket_degree_shift(ctx.S, ctx.settings.degree_bound)
    return Report(
        "value",
        {
            "max_shift": report.max_shift,
            "homogeneous": report.homogeneous,
            "shifts": list(report.shifts),
        },
    )


def _run_valuation(ctx: _Context) -> Report:
    S, ops, s = ctx.S, ctx.operands, ctx.settings
    nu = (
        WeightValuation(tuple(ops.weights))
        if ops.weights is not None
        else WeightValuation.negative_adams(S.arity)
    )
    report = check_w_valuation(nu, S, ops.w, s.degree_bound, s.trials, s.seed)
    payload: dict[str, Any] = {"w": ops.w, "weights": list(nu.weights)}
    if report.passed:
        return Report("pass", payload)
    payload.update(
        axiom=report.axiom, witnesses=[S.render(f) for f in report.witnesses]
    )
    return Report("fail", payload, [report.detail])


def _run_ad_closure(ctx: _Context) -> Report:
    S, d, s = ctx.S, ctx.operands.d, ctx.settings
    report = check_Ad_closure(S, d, s.degree_bound, s.trials, s.seed)
    payload: dict[str, Any] = {"d": d, "trials": report.trials}
    if report.failure is None:
        return Report("pass", payload)
    f, g, value = report.failure
    payload["failure"] = {
        "f": S.render(f),
        "g": S.render(g),
        "bracket": S.render(value),
    }
    return Report("fail", payload, [f"Bracket leaves degrees >= {2 * d - 2}"])


def _run_closure(ctx: _Context) -> Report:
    S, ops = ctx.S, ctx.operands
    seeds = [
        _parse_in(S, text, f"$.operands.seeds[{k}]")
        for k, text in enumerate(ops.seeds)
    ]
    result = bounded_poisson_closure(S, seeds, ops.box, ops.max_rounds)
    diagnostics = [] if result.converged else ["Round limit reached before a fixpoint"]
    return Report(
        "value",
        {
            "basis": [S.render(f) for f in result.basis],
            "rounds": result.rounds,
            "converged": result.converged,
        },
        diagnostics,
    )


def _run_gr_check(ctx: _Context) -> Report:
    S, s = ctx.S, ctx.settings
    if not isinstance(S, PotentialQuotient):
        raise SchemaError(
            f"Command 'gr-check' needs a potential-quotient, got {S.kind}",
            "$.structure.kind",
        )
    report = associated_graded_bracket_check(
        S.omega, S.xi, s.degree_bound, s.trials, s.seed
    )
    payload: dict[str, Any] = {"trials": report.trials, "xi": render_scalar(S.xi)}
    if report.failure is None:
        return Report("pass", payload)
    f, g, lhs, rhs = report.failure
    payload["failure"] = {
        "f": S.render(f),
        "g": S.render(g),
        "lhs": S.render(lhs),
        "rhs": S.render(rhs),
    }
    return Report("fail", payload, ["Leading forms do not match the graded bracket"])


def _run_aut_bound(ctx: _Context) -> Report:
    return Report("value", {"value": aut_bound(ctx.operands.d)})


def _run_axioms(ctx: _Context) -> Report:
    S, s = ctx.S, ctx.settings
    report = verify_poisson_axioms(S, s.degree_bound, s.trials, s.seed)
    payload: dict[str, Any] = {
        "trials": report.trials,
        "degree_bound": report.degree_bound,
    }
    failure = report.failure
    if failure is None:
        return Report("pass", payload)
    payload.update(
        axiom=failure.axiom,
        operands=[S.render(f) for f in failure.operands],
        residue=S.render(failure.residue),
    )
    return Report("fail", payload, [f"{failure.axiom} fails"])


def _run_centrality(ctx: _Context) -> Report:
    S = _potential(ctx)
    report = omega_centrality(S)
    payload = {
        "central": report.central,
        "brackets": [S.render(b) for b in report.brackets],
    }
    if report.central:
        return Report("pass", payload)
    return Report("fail", payload, ["Ω does not Poisson-commute with a generator"])


def _run_adzeta(ctx: _Context) -> Report:
    S, ops = ctx.S, ctx.operands
    zeta = _parse_in(S, ops.zeta, "$.operands.zeta") if ops.zeta is not None else None
    try:
        A = construct_Adzeta(S, ops.d, zeta)
    except ZetaSquareEscapes as e:
        return Report(
            "fail",
            {
                "accepted": False,
                "degree": e.degree,
                "witness": S.render(e.component),
            },
            [str(e)],
        )
    except DegreeViolation as e:
        return Report("fail", {"accepted": False}, [str(e)])

    payload: dict[str, Any] = {"accepted": True, "d": ops.d}
    if zeta is not None:
        payload["zeta"] = S.render(zeta)
    members = []
    for k, text in enumerate(ops.members):
        f = _parse_in(S, text, f"$.operands.members[{k}]")
        members.append({"element": text, "member": A.contains(f)})
    if members:
        payload["members"] = members
    if ops.images is not None:
        phi = _parse_images(S, ops.images, S.arity, "$.operands.images")
        image = zeta_image_check(A, phi.images)
        payload["zeta_image"] = {
            "image": S.render(image.image),
            "proportional": image.proportional,
        }
        if image.factor is not None:
            payload["zeta_image"]["factor"] = render_scalar(image.factor)
    return Report("pass", payload)


def _run_certificate(ctx: _Context) -> Report:
    S, ops = ctx.S, ctx.operands
    T = (
        build_structure(ops.target, "$.operands.target")
        if ops.target is not None
        else S
    )
    phi = _parse_images(T, ops.images, S.arity, "$.operands.images")
    report = injectivity_certificate(phi)
    payload: dict[str, Any] = {
        "certified": report.certified,
        "jacobian": T.render(report.jacobian),
    }
    if report.certified:
        payload["columns"] = [c + 1 for c in report.columns]
        return Report("pass", payload)
    return Report(
        "fail", payload, ["Every maximal Jacobian minor vanishes; inconclusive"]
    )


def _run_normal_form(ctx: _Context) -> Report:
    S, ops = ctx.S, ctx.operands
    if ops.generators is not None:
        f = polynomial(ops.f, S.names, S.parameters, "$.operands.f")
        gens = [
            polynomial(text, S.names, S.parameters, f"$.operands.generators[{k}]")
            for k, text in enumerate(ops.generators)
        ]
        G = groebner_basis(gens, order_from_name(ctx.settings.order))
        return Report(
            "value",
            {
                "normal_form": S.render(G.normal_form(f)),
                "basis": [S.render(g) for g in G.generators],
            },
        )
    if isinstance(S, PotentialQuotient):
        f = polynomial(ops.f, S.names, S.parameters, "$.operands.f")
        return Report("value", {"normal_form": S.render(S.normal_form_mod(f))})
    raise SchemaError(
        "normal-form needs 'generators' or a potential-quotient structure",
        "$.operands",
    )


_HANDLERS: dict[str, Callable[[_Context], Report]] = {
    "bracket": _run_bracket,
    "simple": _run_simple,
    "center": _run_center,
    "morphism-check": _run_morphism_check,
    "classify": _run_classify,
    "dixmier-assert": _run_dixmier_assert,
    "singular": _run_singular,
    "grading": _run_grading,
    "valuation": _run_valuation,
    "ad-closure": _run_ad_closure,
    "closure": _run_closure,
    "gr-check": _run_gr_check,
    "aut-bound": _run_aut_bound,
    "axioms": _run_axioms,
    "centrality": _run_centrality,
    "adzeta": _run_adzeta,
    "certificate": _run_certificate,
    "normal-form": _run_normal_form,
}


def execute_problem(
    data: Union[str, bytes, Mapping[str, Any]],
    overrides: Optional[Mapping[str, Any]] = None,
    config: Optional[ForgeConfig] = None,
) -> Report:
    """
    Validate, build and dispatch one descriptor.

    Args:
        data: Descriptor as JSON text or a decoded mapping
        overrides: Settings that beat the descriptor options (CLI flags)
        config: Configuration supplying the remaining defaults

    Returns:
        Report: pass, fail, not-applicable or value

    Raises:
        ProblemPipelineError: If any stage rejects the input
    """
    config = config or active_config()
    try:
        with use_config(config):
            logger.info("Stage 1: Validating descriptor...")
            descriptor = load_descriptor(data)
            operands = load_operands(descriptor)
            settings = resolve_settings(descriptor, overrides, config)

            logger.info("Stage 2: Building structure...")
            structure = (
                build_structure(descriptor.structure, "$.structure")
                if descriptor.structure is not None
                else None
            )

            logger.info(f"Stage 3: Running '{descriptor.command}'...")
            context = _Context(descriptor, structure, operands, settings)
            report = _HANDLERS[descriptor.command](context)
            logger.info(f"Command finished with status '{report.status}'")
            return report

    except _INPUT_ERRORS as e:
        raise ProblemPipelineError(str(e)) from e


def run_problem(
    data: Union[str, bytes, Mapping[str, Any]],
    overrides: Optional[Mapping[str, Any]] = None,
    config: Optional[ForgeConfig] = None,
) -> Report:
    """Like execute_problem, but input errors become status 'error' reports."""
    try:
        return execute_problem(data, overrides, config)
    except ProblemPipelineError as e:
        logger.error(f"Problem rejected: {e}")
        return Report("error", {}, [str(e)])
