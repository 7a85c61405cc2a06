"""JSON documents for line systems, subspaces, normed spaces and phi states.

Complex entries are written as ``[re, im]`` pairs. Real-field documents may
use bare numbers or pairs with zero imaginary part; loaders normalize both.
Every loader validates against a JSON schema first and then checks the
semantic constraints (unit norms, consistent sizes). Either failure raises
``SchemaError`` carrying the location of the offending element.
"""

from __future__ import annotations

import json
from pathlib import Path

import jsonschema
import numpy as np

from .equiangular import LineSystem
from .errors import ProjConstError, SchemaError
from .minproj import SubspaceBasis
from .norms import NormedSpaceSpec
from .phi.problem import PhiState

_ENTRY = {
    "oneOf": [
        {"type": "number"},
        {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
    ]
}
_MATRIX = {"type": "array", "minItems": 1, "items": {"type": "array", "minItems": 1, "items": _ENTRY}}
_FIELD = {"enum": ["real", "complex"]}

LINE_SYSTEM_SCHEMA = {
    "type": "object",
    "required": ["field", "n", "vectors"],
    "additionalProperties": False,
    "properties": {
        "field": _FIELD,
        "n": {"type": "integer", "minimum": 1},
        "vectors": _MATRIX,
        "weights": {"oneOf": [{"type": "null"}, {"type": "array", "items": {"type": "number", "minimum": 0}}]},
        "label": {"type": "string"},
    },
}

SUBSPACE_BASIS_SCHEMA = {
    "type": "object",
    "required": ["field", "N", "n", "F"],
    "additionalProperties": False,
    "properties": {
        "field": _FIELD,
        "N": {"type": "integer", "minimum": 1},
        "n": {"type": "integer", "minimum": 1},
        "F": _MATRIX,
    },
}

NORMED_SPACE_SCHEMA = {
    "type": "object",
    "required": ["field", "n", "functionals"],
    "additionalProperties": False,
    "properties": {
        "field": _FIELD,
        "n": {"type": "integer", "minimum": 1},
        "functionals": _MATRIX,
        "label": {"type": "string"},
    },
}

PHI_STATE_SCHEMA = {
    "type": "object",
    "required": ["field", "n", "N", "Z", "Lambda"],
    "additionalProperties": False,
    "properties": {
        "field": _FIELD,
        "n": {"type": "integer", "minimum": 1},
        "N": {"type": "integer", "minimum": 1},
        "Z": _MATRIX,
        "Lambda": {"type": "array", "minItems": 1, "items": {"type": "number"}},
        "objective": {"type": "number"},
        "residuals": {"type": "object", "additionalProperties": {"type": "number"}},
        "seed": {"oneOf": [{"type": "null"}, {"type": "integer"}]},
    },
}


def _pointer(path) -> str:
    return "".join(f"/{p}" for p in path)


def _validate(doc, schema):
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        raise SchemaError(exc.message, _pointer(exc.absolute_path)) from None


def _matrix(rows, field, key):
    out = []
    for i, row in enumerate(rows):
        vals = []
        for j, e in enumerate(row):
            z = complex(e[0], e[1]) if isinstance(e, list) else complex(e)
            if field == "real" and z.imag != 0:
                raise SchemaError("real-field entry has nonzero imaginary part", f"/{key}/{i}/{j}")
            vals.append(z if field == "complex" else z.real)
        out.append(vals)
    widths = {len(r) for r in out}
    if len(widths) != 1:
        raise SchemaError("rows have different lengths", f"/{key}")
    return np.array(out, dtype=complex if field == "complex" else float)


def _encode_matrix(M):
    M = np.asarray(M)
    if np.iscomplexobj(M):
        return [[[float(z.real), float(z.imag)] for z in row] for row in M]
    return [[float(x) for x in row] for row in M]


def _unwrap(doc, key):
    """Accept a bare document or a CLI report carrying it under ``key``."""
    if isinstance(doc, dict) and key in doc and isinstance(doc[key], dict):
        return doc[key]
    if isinstance(doc, dict) and isinstance(doc.get("results"), dict) and key in doc["results"]:
        return doc["results"][key]
    return doc


def _construct(build, location=""):
    try:
        return build()
    except SchemaError:
        raise
    except ProjConstError as exc:
        raise SchemaError(str(exc), location) from None


# --- LineSystem -------------------------------------------------------------------

def line_system_to_dict(system: LineSystem) -> dict:
    doc = {
        "field": system.field,
        "n": system.n,
        "vectors": _encode_matrix(system.vectors),
        "weights": None if system.weights is None else [float(w) for w in system.weights],
    }
    if system.label:
        doc["label"] = system.label
    return doc


def line_system_from_dict(doc) -> LineSystem:
    doc = _unwrap(doc, "system")
    _validate(doc, LINE_SYSTEM_SCHEMA)
    V = _matrix(doc["vectors"], doc["field"], "vectors")
    if V.shape[1] != doc["n"]:
        raise SchemaError(f"vectors have length {V.shape[1]}, expected n={doc['n']}", "/vectors")
    w = doc.get("weights")
    if w is not None and len(w) != V.shape[0]:
        raise SchemaError(f"{len(w)} weights for {V.shape[0]} vectors", "/weights")
    return _construct(lambda: LineSystem(doc["field"], V, w, doc.get("label", "")))


# --- SubspaceBasis -------------------------------------------------------------------

def subspace_basis_to_dict(basis: SubspaceBasis) -> dict:
    return {"field": basis.field, "N": basis.N, "n": basis.n, "F": _encode_matrix(basis.F)}


def subspace_basis_from_dict(doc) -> SubspaceBasis:
    doc = _unwrap(doc, "basis")
    _validate(doc, SUBSPACE_BASIS_SCHEMA)
    F = _matrix(doc["F"], doc["field"], "F")
    if F.shape != (doc["N"], doc["n"]):
        raise SchemaError(f"F has shape {F.shape}, expected ({doc['N']}, {doc['n']})", "/F")
    return _construct(lambda: SubspaceBasis(doc["field"], F), "/F")


# --- NormedSpaceSpec -------------------------------------------------------------------

def normed_space_to_dict(spec: NormedSpaceSpec) -> dict:
    return {"field": spec.field, "n": spec.n, "functionals": _encode_matrix(spec.functionals), "label": spec.label}


def normed_space_from_dict(doc) -> NormedSpaceSpec:
    doc = _unwrap(doc, "space")
    _validate(doc, NORMED_SPACE_SCHEMA)
    Z = _matrix(doc["functionals"], doc["field"], "functionals")
    if Z.shape[1] != doc["n"]:
        raise SchemaError(f"functionals have length {Z.shape[1]}, expected n={doc['n']}", "/functionals")
    return _construct(lambda: NormedSpaceSpec(doc["field"], Z, doc.get("label", "")), "/functionals")


# --- PhiState ---------------------------------------------------------------------------

def phi_state_to_dict(state: PhiState) -> dict:
    return {
        "field": state.field,
        "n": state.n,
        "N": state.N,
        "Z": _encode_matrix(state.Z),
        "Lambda": [float(x) for x in state.Lambda],
        "objective": state.objective,
        "residuals": {"orthonormality": state.orthonormality_residual, "mass": state.mass_residual},
        "seed": state.seed,
    }


def phi_state_from_dict(doc) -> PhiState:
    doc = _unwrap(doc, "state")
    _validate(doc, PHI_STATE_SCHEMA)
    Z = _matrix(doc["Z"], doc["field"], "Z")
    if Z.shape != (doc["N"], doc["n"]):
        raise SchemaError(f"Z has shape {Z.shape}, expected ({doc['N']}, {doc['n']})", "/Z")
    if len(doc["Lambda"]) != doc["N"]:
        raise SchemaError(f"Lambda has {len(doc['Lambda'])} entries, expected N={doc['N']}", "/Lambda")
    return _construct(lambda: PhiState.from_arrays(doc["field"], Z, doc["Lambda"], doc.get("seed")))


# --- files ------------------------------------------------------------------------------------

def read_json(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})") from None


def dumps(doc) -> str:
    """Deterministic serialization: sorted keys, round-trip float repr."""
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False)
