"""Strict JSON experiment configs."""

import json
import math
from pathlib import Path

import jsonschema

from .channel import GeometricPathConfig, GroupingConfig, SystemDims
from .errors import ConfigError
from .estimators import CoordDescentOptions
from .harness import MODELS, ExperimentConfig, OmpConfig
from .metrics import SCHEMES

__all__ = ["CONFIG_SCHEMA", "parse_config", "load_config_dict", "config_from_dict"]

_pos_int = {"type": "integer", "minimum": 1}
_pos_num = {"type": "number", "exclusiveMinimum": 0}

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["dims", "schemes", "snr_db", "trials", "seed"],
    "properties": {
        "dims": {
            "type": "object",
            "additionalProperties": False,
            "required": ["M", "N", "K"],
            "properties": {"M": _pos_int, "N": _pos_int, "K": _pos_int},
        },
        "model": {"enum": list(MODELS)},
        "paths": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "L_G": _pos_int,
                "L_r": _pos_int,
                "on_grid": {"type": "boolean"},
                "gain_variance": _pos_num,
            },
        },
        "schemes": {
            "type": "array",
            "minItems": 1,
            "uniqueItems": True,
            "items": {"enum": list(SCHEMES)},
        },
        "grouping": {
            "type": "object",
            "additionalProperties": False,
            "required": ["B"],
            "properties": {"B": _pos_int},
        },
        "snr_db": {
            "type": "array",
            "minItems": 1,
            "items": {"anyOf": [{"type": "number"}, {"const": "inf"}]},
        },
        "trials": _pos_int,
        "seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
        "T_d": {"type": "integer", "minimum": 0},
        "P": _pos_int,
        "omp": {
            "type": "object",
            "additionalProperties": False,
            "required": ["T"],
            "properties": {"T": _pos_int, "S": _pos_int, "epsilon": _pos_num},
            "oneOf": [{"required": ["S"]}, {"required": ["epsilon"]}],
        },
        "coord_descent": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "max_sweeps": _pos_int,
                "rel_tol": _pos_num,
                "restarts": _pos_int,
            },
        },
    },
}

_validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)


def _reject_constant(name):
    raise ValueError(f"non-standard JSON constant {name}")


def load_config_dict(path):
    """Read and schema-check a config file; return the raw dict."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc.strerror or exc}") from exc
    try:
        data = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}") from exc
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    validate_dict(data, source=str(path))
    return data


def validate_dict(data, source="config"):
    errors = sorted(_validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        lines = []
        for err in errors:
            where = "/".join(str(p) for p in err.absolute_path) or "<root>"
            lines.append(f"{source}: {where}: {err.message}")
        raise ConfigError("\n".join(lines))


def config_from_dict(data):
    """Build an :class:`ExperimentConfig`, applying defaults for optional fields."""
    validate_dict(data)
    paths = GeometricPathConfig(**data.get("paths", {}))
    grouping = GroupingConfig(**data["grouping"]) if "grouping" in data else None
    omp = OmpConfig(**data["omp"]) if "omp" in data else None
    cd = CoordDescentOptions(**data.get("coord_descent", {}))
    snr = [math.inf if s == "inf" else float(s) for s in data["snr_db"]]
    return ExperimentConfig(
        dims=SystemDims(**data["dims"]),
        schemes=tuple(data["schemes"]),
        snr_db=tuple(snr),
        trials=data["trials"],
        seed=data["seed"],
        model=data.get("model", "rayleigh"),
        paths=paths,
        grouping=grouping,
        T_d=data.get("T_d", 1),
        P=data.get("P", 100),
        omp=omp,
        coord_descent=cd,
    )


def parse_config(path):
    """Parse a JSON experiment config; any problem raises :class:`ConfigError`."""
    return config_from_dict(load_config_dict(path))
