"""The JSON configuration document describing a context (A, alpha) with its field and caps."""

import json
import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import jsonschema
from sympy.polys.rings import PolyRing

from twisted_forms.errors import ConfigError
from twisted_forms.expressions import parse_polynomial, parse_scalar
from twisted_forms.kernel import EndoSpec, FieldSpec, Relation, polynomial_ring
from twisted_forms.omega import AlgebraCtx

logger = logging.getLogger(__name__)

_SCALAR = {"type": ["string", "integer"]}
_NAME = {"type": "string", "pattern": "^[A-Za-z_][A-Za-z0-9_]*$"}

CONFIG_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["field", "variables", "endo", "caps"],
    "additionalProperties": False,
    "properties": {
        "field": {
            "oneOf": [
                {"const": "Q"},
                {
                    "type": "object",
                    "required": ["Fp"],
                    "additionalProperties": False,
                    "properties": {"Fp": {"type": "integer", "minimum": 2}},
                },
                {
                    "type": "object",
                    "required": ["Qq"],
                    "additionalProperties": False,
                    "properties": {"Qq": {"const": True}, "parameter": _NAME},
                },
            ]
        },
        "q_value": _SCALAR,
        "variables": {"type": "array", "minItems": 1, "uniqueItems": True, "items": _NAME},
        "endo": {
            "type": "object",
            "minProperties": 1,
            "maxProperties": 1,
            "additionalProperties": False,
            "properties": {
                "diagonal": {"type": "array", "items": _SCALAR},
                "matrix": {"type": "array", "items": {"type": "array", "items": _SCALAR}},
                "images": {"type": "array", "items": {"type": "string"}},
            },
        },
        "relations": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["var", "power", "rhs"],
                "additionalProperties": False,
                "properties": {
                    "var": _NAME,
                    "power": {"type": "integer", "minimum": 1},
                    "rhs": _SCALAR,
                },
            },
        },
        "caps": {
            "type": "object",
            "required": ["var_degree", "form_degree"],
            "additionalProperties": False,
            "properties": {
                "var_degree": {"type": "integer", "minimum": 0},
                "form_degree": {"type": "integer", "minimum": 0},
            },
        },
    },
}


@dataclass(frozen=True, eq=False)
class Config:
    field_spec: FieldSpec
    variables: tuple[str, ...]
    endo: EndoSpec
    max_var_degree: int
    max_form_degree: int
    ctx: AlgebraCtx

    @classmethod
    def from_document(cls, document: Mapping[str, Any]) -> "Config":
        validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
        errors = sorted(validator.iter_errors(document), key=lambda error: list(error.absolute_path))
        if errors:
            error = errors[0]
            location = "/".join(str(part) for part in error.absolute_path) or "<document>"
            msg = f"invalid config at {location}: {error.message}"
            raise ConfigError(msg)

        field_spec = _field_spec(document)
        variables = tuple(document["variables"])
        _check_names(variables, field_spec)
        ring = polynomial_ring(field_spec, variables)
        relations = [_relation(entry, variables, ring, field_spec) for entry in document.get("relations", [])]
        endo = _endomorphism(document["endo"], variables, ring, field_spec, relations)
        caps = document["caps"]
        ctx = AlgebraCtx(field_spec, variables, endo, caps["var_degree"], caps["form_degree"])
        logger.info(
            "loaded %s over %s in %s, caps D=%d N=%d",
            endo.describe(),
            field_spec.describe(),
            ", ".join(variables),
            ctx.max_var_degree,
            ctx.max_form_degree,
        )
        return cls(field_spec, variables, endo, ctx.max_var_degree, ctx.max_form_degree, ctx)

    def context(self, max_var_degree: int | None = None, max_form_degree: int | None = None) -> AlgebraCtx:
        """The configured context, or a fresh one with overridden caps."""
        if max_var_degree is None and max_form_degree is None:
            return self.ctx
        return self.ctx.with_caps(
            self.max_var_degree if max_var_degree is None else max_var_degree,
            self.max_form_degree if max_form_degree is None else max_form_degree,
        )


def load_config(path: Path | str) -> Config:
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except OSError as error:
        msg = f"cannot read config {path}: {error}"
        raise ConfigError(msg) from error
    except json.JSONDecodeError as error:
        msg = f"config {path} is not valid JSON: {error}"
        raise ConfigError(msg) from error
    if not isinstance(document, dict):
        msg = f"config {path} must hold a JSON object"
        raise ConfigError(msg)
    return Config.from_document(document)


def _field_spec(document: Mapping[str, Any]) -> FieldSpec:
    field = document["field"]
    q_value = document.get("q_value")
    q_value = None if q_value is None else str(q_value)
    if field == "Q":
        return FieldSpec.rationals(q_value)
    if "Fp" in field:
        return FieldSpec.prime_field(field["Fp"], q_value)
    if q_value is not None:
        msg = "q_value cannot be combined with a rational function field"
        raise ConfigError(msg)
    return FieldSpec.rational_functions(field.get("parameter", "q"))


def _check_names(variables: Sequence[str], field_spec: FieldSpec) -> None:
    for name in variables:
        if name.startswith("d"):
            msg = f"variable {name!r} starts with 'd', which is reserved for differentials"
            raise ConfigError(msg)
        if name == field_spec.parameter:
            msg = f"variable {name!r} clashes with the field parameter"
            raise ConfigError(msg)


def _relation(entry: Mapping[str, Any], variables: Sequence[str], ring: PolyRing, field_spec: FieldSpec) -> Relation:
    if entry["var"] not in variables:
        msg = f"relation for unknown variable {entry['var']!r}"
        raise ConfigError(msg)
    rhs = parse_polynomial(str(entry["rhs"]), ring, field_spec)
    return Relation(variables.index(entry["var"]), entry["power"], rhs)


def _endomorphism(
    entry: Mapping[str, Any], variables: Sequence[str], ring: PolyRing, field_spec: FieldSpec, relations: list[Relation]
) -> EndoSpec:
    count = len(variables)
    if "diagonal" in entry:
        if len(entry["diagonal"]) != count:
            msg = f"diagonal needs {count} entries, got {len(entry['diagonal'])}"
            raise ConfigError(msg)
        scalars = [parse_scalar(str(value), field_spec) for value in entry["diagonal"]]
        return EndoSpec.diagonal(ring, scalars, relations)
    if "matrix" in entry:
        matrix = entry["matrix"]
        if len(matrix) != count or any(len(row) != count for row in matrix):
            msg = f"matrix must be {count}x{count}"
            raise ConfigError(msg)
        scalars_by_row = [[parse_scalar(str(value), field_spec) for value in row] for row in matrix]
        return EndoSpec.linear(ring, scalars_by_row, relations)
    images = entry["images"]
    if len(images) != count:
        msg = f"images needs {count} entries, got {len(images)}"
        raise ConfigError(msg)
    return EndoSpec.general(ring, [parse_polynomial(image, ring, field_spec) for image in images], relations)
