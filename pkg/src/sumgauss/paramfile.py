"""JSON parameter files: ``{"version": 1, "k": [...], "w": [...], "meta": {...}}``."""

import json

import jsonschema

from .approx import ParameterSet
from .errors import ContractError

VERSION = 1

SCHEMA = {
    "type": "object",
    "required": ["version", "k", "w"],
    "properties": {
        "version": {"const": VERSION},
        "k": {"type": "array", "minItems": 1, "items": {"type": "number"}},
        "w": {"type": "array", "minItems": 1, "items": {"type": "number"}},
        "meta": {"type": "object"},
    },
}


class ParamFileError(ContractError):
    pass


def to_document(params, meta=None):
    doc = {"version": VERSION, "k": list(params.k), "w": list(params.w)}
    if meta:
        doc["meta"] = meta
    return doc


def from_document(doc):
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ParamFileError(f"invalid parameter file at {path}: {exc.message}") from None
    try:
        return ParameterSet(doc["k"], doc["w"])
    except ContractError as exc:
        raise ParamFileError(f"invalid parameter file: {exc}") from None


def load(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParamFileError(f"cannot read {path}: {exc}") from None
    return from_document(doc)


def parse_inline(text):
    """``k=1.01,1.23345`` or ``k=1.025187,1.1249,1.31336;w=0.5,0.25,0.25``.

    Weights default to uniform.
    """
    fields = {}
    for part in text.split(";"):
        if "=" not in part:
            raise ParamFileError(f"inline parameters need key=values, got {part!r}")
        key, _, vals = part.partition("=")
        try:
            fields[key.strip()] = [float(v) for v in vals.split(",")]
        except ValueError:
            raise ParamFileError(f"non-numeric value in {part!r}") from None
    if set(fields) - {"k", "w"} or "k" not in fields:
        raise ParamFileError(f"inline parameters take k= and optional w=, got {sorted(fields)}")
    k = fields["k"]
    w = fields.get("w", [1.0 / len(k)] * len(k))
    return from_document({"version": VERSION, "k": k, "w": w})
