"""Versioned JSON configuration documents for ``gcmlab verify``.

A document looks like::

    {
      "version": 1,
      "seed": 20240611,
      "output_dir": "reports",
      "experiment": {
        "scenario": "isoreg",
        "truth": {"coefficients": [0, 1]},
        "t0": 0.5,
        "dependence": {"kind": "iid", "sigma": 0.3},
        "n_grid": [400, 1600, 6400],
        "R": 2000,
        "tolerances": {"exponent": 0.08, "ks": 0.08}
      }
    }

Unknown keys are rejected; every error carries the JSON pointer of the
offending value.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from jsonschema import Draft202012Validator

from ._errors import ValidationError
from .harness import SCENARIOS, ExperimentConfig

__all__ = ["SCHEMA", "ConfigDocument", "validate_document", "load_config", "bundled_config_path"]

SCHEMA_VERSION = 1

_NUMBER = {"type": "number"}
_POS = {"type": "number", "exclusiveMinimum": 0}
_TOL = {"oneOf": [{"type": "number", "minimum": 0}, {"type": "null"}]}

_KERNEL = {
    "oneOf": [
        {"type": "string", "enum": ["epanechnikov", "biweight", "triweight"]},
        {
            "type": "object",
            "properties": {
                "family": {"type": "string", "enum": ["epanechnikov", "biweight", "triweight", "custom"]},
                "coefficients": {"type": "array", "items": _NUMBER, "minItems": 1},
            },
            "required": ["family"],
            "additionalProperties": False,
        },
    ]
}

_DEPENDENCE = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["iid", "ar1", "lrd"]},
        "sigma": {"type": "number", "minimum": 0},
        "dist": {"enum": ["normal", "uniform", "laplace"]},
        "rho": _NUMBER,
        "innovation_sd": _POS,
        "H": _NUMBER,
        "d": _NUMBER,
        "g": {"enum": ["identity", "square_minus_one", "sign", "polynomial"]},
        "coefficients": {"type": "array", "items": _NUMBER},
    },
    "required": ["kind"],
    "additionalProperties": False,
}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "gcmlab configuration",
    "type": "object",
    "properties": {
        "version": {"const": SCHEMA_VERSION},
        "seed": {"type": "integer", "minimum": 0},
        "output_dir": {"type": "string"},
        "experiment": {
            "type": "object",
            "properties": {
                "scenario": {"enum": list(SCENARIOS)},
                "truth": {
                    "type": "object",
                    "properties": {
                        "coefficients": {"type": "array", "items": _NUMBER, "minItems": 1},
                        "support": {"type": "array", "items": _NUMBER, "minItems": 2, "maxItems": 2},
                    },
                    "required": ["coefficients"],
                    "additionalProperties": False,
                },
                "t0": _NUMBER,
                "dependence": _DEPENDENCE,
                "n_grid": {"type": "array", "items": {"type": "integer", "minimum": 2}, "minItems": 1},
                "R": {"type": "integer", "minimum": 100},
                "bandwidth": {
                    "type": "object",
                    "properties": {"constant": _POS, "exponent": _NUMBER},
                    "additionalProperties": False,
                },
                "kernel": _KERNEL,
                "limit": {
                    "type": "object",
                    "properties": {"R": {"type": "integer", "minimum": 1}, "c_max": _POS, "delta": _POS},
                    "additionalProperties": False,
                },
                "tolerances": {
                    "type": "object",
                    "properties": {"exponent": _TOL, "ks": _TOL},
                    "additionalProperties": False,
                },
            },
            "required": ["scenario", "truth", "t0"],
            "additionalProperties": False,
        },
    },
    "required": ["version", "seed", "experiment"],
    "additionalProperties": False,
}

_VALIDATOR = Draft202012Validator(SCHEMA)


def _pointer(path) -> str:
    return "/" + "/".join(str(p) for p in path) if path else "/"


def validate_document(doc) -> None:
    """Raise :class:`ValidationError` for the first schema violation (by path)."""
    errors = sorted(_VALIDATOR.iter_errors(doc), key=lambda e: (list(map(str, e.absolute_path)), e.message))
    if errors:
        err = errors[0]
        more = f" (+{len(errors) - 1} more)" if len(errors) > 1 else ""
        raise ValidationError(f"{err.message}{more}", path=_pointer(err.absolute_path))


@dataclass(frozen=True)
class ConfigDocument:
    """A validated configuration document."""

    experiment: ExperimentConfig
    seed: int
    output_dir: str = "."
    version: int = SCHEMA_VERSION

    @classmethod
    def from_dict(cls, doc):
        validate_document(doc)
        exp = dict(doc["experiment"])
        exp["seed"] = doc["seed"]
        try:
            experiment = ExperimentConfig.from_dict(exp)
        except ValidationError as err:
            # re-anchor module-level paths under /experiment
            path = "/experiment" + (err.path if err.path and err.path != "/" else "")
            raise ValidationError(err.message, path=path, hypothesis=err.hypothesis) from None
        return cls(experiment=experiment, seed=int(doc["seed"]), output_dir=doc.get("output_dir", "."),
                   version=int(doc["version"]))

    def to_dict(self):
        exp = self.experiment.to_dict()
        exp.pop("seed")
        return {"version": self.version, "seed": self.seed, "output_dir": self.output_dir, "experiment": exp}


def bundled_config_path(name: str):
    """Path of a config shipped with the package (``'thm3i'`` or ``'thm3i.cfg'``), or None."""
    fname = name if name.endswith(".cfg") else f"{name}.cfg"
    res = resources.files("gcmlab").joinpath("configs", fname)
    return Path(str(res)) if res.is_file() else None


def load_config(path) -> ConfigDocument:
    """Read and validate a JSON config file.

    A missing path whose file name matches a bundled config (``thm3i``,
    ``examples/thm3i.cfg``) resolves to the bundled copy.

    Raises
    ------
    OSError
        If the file cannot be read.
    ValidationError
        For malformed JSON or schema/hypothesis violations.
    """
    p = Path(path)
    if not p.exists():
        # fall back to a bundled config of the same file name
        bundled = bundled_config_path(p.name)
        if bundled is not None:
            p = bundled
    text = p.read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ValidationError(f"invalid JSON in {p}: {err.msg} (line {err.lineno})", path="/") from None
    return ConfigDocument.from_dict(doc)
