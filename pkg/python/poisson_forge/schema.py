"""
Poisson-Forge Problem Descriptor Schema

This module defines the JSON problem descriptors accepted by the command-line
front end and turns structure descriptors into Poisson structures.

Features:
- Descriptor Models:
  • Pydantic models with unknown fields rejected at every level
  • Structure descriptors discriminated by their "kind" field
  • Per-command operand models validated before dispatch
- Structure Construction:
  • Skew-symmetry of Λ enforced entry by entry at parse time
  • Homogeneity of potentials enforced at parse time
  • Recursive tensor descriptors
- Error Reporting:
  • Every rejection carries a JSON path such as $.structure.lambda[1][0]

Use Cases:
- Validate hand-written fixture files before any computation runs
- Build structures from JSON in tests and batch drivers
"""

import json
import logging

from typing import (
    Annotated,
    Any,
    Literal,
    Mapping,
    Optional,
    Sequence,
    Union,
    get_args,
)

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    StrictInt,
    StrictStr,
    TypeAdapter,
    ValidationError,
    model_validator,
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
)
from .notation import NotationError, parse_poly, parse_scalar
from .poly import LaurentPoly, PolyError, Scalar, order_from_name


logger = logging.getLogger(__name__)

POTENTIAL_NAMES = ("x", "y", "z")

Command = Literal[
    "bracket",
    "simple",
    "center",
    "morphism-check",
    "classify",
    "dixmier-assert",
    "singular",
    "grading",
    "valuation",
    "ad-closure",
    "closure",
    "gr-check",
    "aut-bound",
    "axioms",
    "centrality",
    "adzeta",
    "certificate",
    "normal-form",
]
OrderName = Literal["grevlex", "grlex", "lex"]
ScalarEntry = Union[StrictInt, StrictStr]

COMMANDS: tuple[str, ...] = get_args(Command)


class SchemaError(Exception):
    """Raised when a descriptor is malformed; carries the offending JSON path."""

    def __init__(self, message: str, path: str = "$") -> None:
        super().__init__(f"{path}: {message}")
        self.message = message
        self.path = path


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True, frozen=True)


class _LambdaSpec(_Model):
    n: Optional[StrictInt] = Field(default=None, ge=1)
    lam: list[list[ScalarEntry]] = Field(alias="lambda", min_length=1)
    parameters: Optional[list[StrictStr]] = None


class TorusSpec(_LambdaSpec):
    kind: Literal["torus"]


class SkewSpec(_LambdaSpec):
    kind: Literal["skew"]


class PotentialSpec(_Model):
    kind: Literal["potential"]
    omega: StrictStr


class PotentialQuotientSpec(_Model):
    kind: Literal["potential-quotient"]
    omega: StrictStr
    xi: ScalarEntry = 0
    order: Optional[OrderName] = None


class WeylSpec(_Model):
    kind: Literal["weyl"]
    pairs: StrictInt = Field(default=1, ge=1)
    laurent_x: bool = False


class TableEntrySpec(_Model):
    left: StrictStr
    right: StrictStr
    value: StrictStr


class TableSpec(_Model):
    kind: Literal["table"]
    variables: list[StrictStr] = Field(min_length=1)
    brackets: list[TableEntrySpec] = Field(default_factory=list)
    laurent: bool = False
    parameters: Optional[list[StrictStr]] = None


class TensorSpec(_Model):
    kind: Literal["tensor"]
    factors: list["StructureSpec"] = Field(min_length=1)


StructureSpec = Annotated[
    Union[
        TorusSpec,
        SkewSpec,
        PotentialSpec,
        PotentialQuotientSpec,
        WeylSpec,
        TableSpec,
        TensorSpec,
    ],
    Field(discriminator="kind"),
]

TensorSpec.model_rebuild()


class OptionsSpec(_Model):
    degree_bound: Optional[StrictInt] = Field(default=None, ge=0)
    trials: Optional[StrictInt] = Field(default=None, ge=1)
    seed: Optional[StrictInt] = None
    order: Optional[OrderName] = None


class ProblemDescriptor(_Model):
    """One command applied to one structure."""

    command: Command
    structure: Optional[StructureSpec] = None
    operands: dict[str, Any] = Field(default_factory=dict)
    options: OptionsSpec = Field(default_factory=OptionsSpec)


class NoOperands(_Model):
    pass


class BracketOperands(_Model):
    f: StrictStr
    g: StrictStr


class MorphismOperands(_Model):
    images: list[StrictStr] = Field(min_length=1)
    target: Optional[StructureSpec] = None
    base_arity: Optional[StrictInt] = Field(default=None, ge=1)


class MonomialMapOperands(_Model):
    """A monomial map given either by image strings or by exponent columns."""

    images: Optional[list[StrictStr]] = None
    columns: Optional[list[list[StrictInt]]] = None
    coefficients: Optional[list[ScalarEntry]] = None

    @model_validator(mode="after")
    def _one_presentation(self) -> "MonomialMapOperands":
        if (self.images is None) == (self.columns is None):
            raise ValueError("give exactly one of 'images' and 'columns'")
        if self.images is not None and self.coefficients is not None:
            raise ValueError("'coefficients' only accompany 'columns'")
        return self


class ValuationOperands(_Model):
    w: StrictInt
    weights: Optional[list[StrictInt]] = None


class ThresholdOperands(_Model):
    d: StrictInt


class ClosureOperands(_Model):
    seeds: list[StrictStr] = Field(min_length=1)
    box: StrictInt = Field(ge=0)
    max_rounds: Optional[StrictInt] = Field(default=None, ge=0)


class AdzetaOperands(_Model):
    d: StrictInt
    zeta: Optional[StrictStr] = None
    members: list[StrictStr] = Field(default_factory=list)
    images: Optional[list[StrictStr]] = None


class CertificateOperands(_Model):
    images: list[StrictStr] = Field(min_length=1)
    target: Optional[StructureSpec] = None


class NormalFormOperands(_Model):
    f: StrictStr
    generators: Optional[list[StrictStr]] = None


COMMAND_OPERANDS: dict[str, type[_Model]] = {
    "bracket": BracketOperands,
    "simple": NoOperands,
    "center": NoOperands,
    "morphism-check": MorphismOperands,
    "classify": MonomialMapOperands,
    "dixmier-assert": MonomialMapOperands,
    "singular": NoOperands,
    "grading": NoOperands,
    "valuation": ValuationOperands,
    "ad-closure": ThresholdOperands,
    "closure": ClosureOperands,
    "gr-check": NoOperands,
    "aut-bound": ThresholdOperands,
    "axioms": NoOperands,
    "centrality": NoOperands,
    "adzeta": AdzetaOperands,
    "certificate": CertificateOperands,
    "normal-form": NormalFormOperands,
}

_UNION_TAGS = frozenset(
    {
        "torus",
        "skew",
        "potential",
        "potential-quotient",
        "weyl",
        "table",
        "tensor",
        "int",
        "str",
    }
)


def json_path(loc: Sequence[Union[str, int]], prefix: str = "$") -> str:
    """Render a pydantic error location as a JSON path, dropping union tags."""
    path = prefix
    for part in loc:
        if isinstance(part, int):
            path += f"[{part}]"
        elif part in _UNION_TAGS or "[" in part:
            continue
        else:
            path += f".{part}"
    return path


def _schema_error(error: ValidationError, prefix: str) -> SchemaError:
    first = error.errors()[0]
    return SchemaError(first["msg"], json_path(first["loc"], prefix))


def _load_json(data: Union[str, bytes, Mapping[str, Any]]) -> Any:
    if isinstance(data, (str, bytes)):
        try:
            return json.loads(data)
        except json.JSONDecodeError as e:
            raise SchemaError(f"Invalid JSON: {e}") from e
    return data


def load_descriptor(data: Union[str, bytes, Mapping[str, Any]]) -> ProblemDescriptor:
    """
    Validate a problem descriptor given as JSON text or a decoded mapping.

    Raises:
        SchemaError: On invalid JSON or any schema violation
    """
    raw = _load_json(data)
    if not isinstance(raw, dict):
        raise SchemaError("Descriptor must be a JSON object")
    try:
        return ProblemDescriptor.model_validate(raw)
    except ValidationError as e:
        raise _schema_error(e, "$") from e


def load_operands(descriptor: ProblemDescriptor) -> Any:
    """Validate the operands of a descriptor against its command's model."""
    model = COMMAND_OPERANDS[descriptor.command]
    try:
        return model.model_validate(descriptor.operands)
    except ValidationError as e:
        raise _schema_error(e, "$.operands") from e


def _scalar(
    value: ScalarEntry, parameters: Optional[Sequence[str]], path: str
) -> Scalar:
    try:
        return parse_scalar(value, parameters)
    except NotationError as e:
        raise SchemaError(str(e), path) from e


def polynomial(
    text: str,
    names: Sequence[str],
    parameters: Sequence[str],
    path: str,
) -> LaurentPoly:
    """Parse a polynomial string, reporting failures at path."""
    try:
        return parse_poly(text, names, parameters)
    except NotationError as e:
        raise SchemaError(str(e), path) from e


def _skew_matrix(spec: _LambdaSpec, path: str) -> SkewParamMatrix:
    rows = spec.lam
    n = len(rows)
    if spec.n is not None and spec.n != n:
        raise SchemaError(f"n = {spec.n} but lambda has {n} rows", f"{path}.n")
    for i, row in enumerate(rows):
        if len(row) != n:
            raise SchemaError(
                f"Row has {len(row)} entries, expected {n}", f"{path}.lambda[{i}]"
            )
    entries = [
        [
            _scalar(value, spec.parameters, f"{path}.lambda[{i}][{j}]")
            for j, value in enumerate(row)
        ]
        for i, row in enumerate(rows)
    ]
    for i in range(n):
        if not entries[i][i].is_zero():
            raise SchemaError("Diagonal entry must be 0", f"{path}.lambda[{i}][{i}]")
        for j in range(i + 1, n):
            if entries[j][i] != -entries[i][j]:
                raise SchemaError(
                    f"Matrix is not skew-symmetric: entry ({j + 1},{i + 1}) must "
                    f"be the negative of entry ({i + 1},{j + 1})",
                    f"{path}.lambda[{j}][{i}]",
                )
    return SkewParamMatrix.from_rows(entries)


def _potential(text: str, path: str) -> LaurentPoly:
    omega = polynomial(text, POTENTIAL_NAMES, (), f"{path}.omega")
    if omega.is_zero() or not omega.is_homogeneous():
        raise SchemaError("Potential must be a nonzero homogeneous polynomial", path)
    return omega


def _table(spec: TableSpec, path: str) -> GeneratorTable:
    names = tuple(spec.variables)
    if len(set(names)) != len(names):
        raise SchemaError("Variable names must be distinct", f"{path}.variables")
    parameters = spec.parameters if spec.parameters is not None else ()
    entries: dict[tuple[int, int], LaurentPoly] = {}
    for k, entry in enumerate(spec.brackets):
        here = f"{path}.brackets[{k}]"
        if entry.left not in names or entry.right not in names:
            raise SchemaError("Bracket refers to an unknown variable", here)
        i, j = names.index(entry.left), names.index(entry.right)
        if i == j:
            raise SchemaError("A variable Poisson-commutes with itself", here)
        value = polynomial(entry.value, names, parameters, f"{here}.value")
        if i > j:
            i, j, value = j, i, -value
        if (i, j) in entries:
            raise SchemaError("Bracket of this pair is given twice", here)
        entries[(i, j)] = value
    return GeneratorTable(tuple(sorted(entries.items())), names, spec.laurent)


def build_structure(spec: Any, path: str = "$") -> PoissonStructure:
    """
    Construct the Poisson structure described by a validated model.

    Raises:
        SchemaError: If the described structure is invalid
    """
    try:
        if isinstance(spec, TorusSpec):
            return Torus(_skew_matrix(spec, path))
        if isinstance(spec, SkewSpec):
            return SkewPoly(_skew_matrix(spec, path))
        if isinstance(spec, PotentialQuotientSpec):
            order = order_from_name(spec.order or "grevlex")
            return PotentialQuotient(
                _potential(spec.omega, path),
                _scalar(spec.xi, (), f"{path}.xi"),
                order,
            )
        if isinstance(spec, PotentialSpec):
            return PotentialAffine(_potential(spec.omega, path))
        if isinstance(spec, WeylSpec):
            return Weyl(spec.pairs, spec.laurent_x)
        if isinstance(spec, TableSpec):
            return _table(spec, path)
        if isinstance(spec, TensorSpec):
            factors = tuple(
                build_structure(factor, f"{path}.factors[{k}]")
                for k, factor in enumerate(spec.factors)
            )
            return Tensor(factors)
    except (StructureError, PolyError) as e:
        raise SchemaError(str(e), path) from e
    raise SchemaError(f"Unsupported structure descriptor {type(spec).__name__}", path)


_STRUCTURE_ADAPTER: TypeAdapter[Any] = TypeAdapter(StructureSpec)


def parse_structure(
    data: Union[str, bytes, Mapping[str, Any]], path: str = "$"
) -> PoissonStructure:
    """
    Validate a structure descriptor and build the structure.

    Example:
        {"kind": "torus", "n": 3, "lambda": [[0,1,1],[-1,0,1],[-1,-1,0]]}

    Raises:
        SchemaError: On schema violations, non-skew Λ or non-homogeneous Ω
    """
    raw = _load_json(data)
    try:
        spec = _STRUCTURE_ADAPTER.validate_python(raw)
    except ValidationError as e:
        raise _schema_error(e, path) from e
    structure = build_structure(spec, path)
    logger.debug(f"Parsed {structure.kind} structure with {structure.arity} variables")
    return structure
