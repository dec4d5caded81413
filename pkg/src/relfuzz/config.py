"""Run configuration: a versioned JSON document with unit-suffixed keys."""

from dataclasses import dataclass
import hashlib
import json
from pathlib import Path

import jsonschema

from .failure import FailureModel, StressFactors, ThermalElectricalParams
from .fuzzy import TFN, DEFAULT_ALPHA_LEVELS
from .mission import T_AMBIENT_BOUNDS
from .redundancy import ALPHA_CUT, CONSISTENT, RedundancyConfig, normalize_method

__all__ = ["ConfigError", "RunConfig", "load_config", "parse_config", "CONFIG_SCHEMA", "canonical_hash"]


class ConfigError(ValueError):
    pass


_TRIPLE = {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3}
_POS = {"type": "number", "exclusiveMinimum": 0}
_NONNEG = {"type": "number", "minimum": 0}

CONFIG_SCHEMA = {
    "type": "object",
    "required": ["schema", "converter", "device", "failure", "redundancy"],
    "additionalProperties": False,
    "properties": {
        "schema": {"const": 1},
        "converter": {
            "type": "object",
            "required": ["v_in_v", "v_out_v"],
            "additionalProperties": False,
            "properties": {"v_in_v": _POS, "v_out_v": _POS},
        },
        "device": {
            "type": "object",
            "required": ["r_ds_on_ohm", "r_th_ja_c_per_w"],
            "additionalProperties": False,
            "properties": {
                "r_ds_on_ohm": _NONNEG,
                "r_th_ja_c_per_w": _POS,
                "e_sw_j": _NONNEG,
                "f_sw_hz": _NONNEG,
                "i_ref_a": _POS,
                "tj_max_c": {"type": "number"},
            },
        },
        "failure": {
            "type": "object",
            "required": ["lambda_b_per_1e6h"],
            "additionalProperties": False,
            "properties": {"lambda_b_per_1e6h": _TRIPLE, "pi_q": _POS, "pi_a": _POS, "pi_e": _POS},
        },
        "redundancy": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["kind", "coverage"],
                "additionalProperties": False,
                "properties": {
                    "kind": {"enum": ["parallel", "standby"]},
                    "coverage": _TRIPLE,
                    "formula_variant": {"enum": ["as-printed", "consistent"]},
                },
            },
        },
        "fuzzy": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "method": {"enum": ["alpha-cut", "vertex"]},
                "alpha_levels": {"type": "integer", "minimum": 2},
            },
        },
        "simulation": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "trials": {"type": "integer", "minimum": 1},
                "seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
            },
        },
        "mission": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"t_ambient_bounds_c": {"type": "array", "items": {"type": "number"},
                                                  "minItems": 2, "maxItems": 2}},
        },
    },
}


@dataclass(frozen=True)
class RunConfig:
    failure_model: FailureModel
    redundancy: tuple
    method: str = ALPHA_CUT
    alpha_levels: int = DEFAULT_ALPHA_LEVELS
    trials: int = 100_000
    seed: int = 0
    t_bounds: tuple = T_AMBIENT_BOUNDS
    sha256: str = ""

    def with_overrides(self, variant=None, method=None):
        red = self.redundancy
        if variant is not None:
            red = tuple(RedundancyConfig(r.kind, r.coverage, variant) for r in red)
        return RunConfig(self.failure_model, red, normalize_method(method) if method else self.method,
                         self.alpha_levels, self.trials, self.seed, self.t_bounds, self.sha256)


def canonical_hash(doc) -> str:
    blob = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def _tfn(values, field, unit=""):
    try:
        return TFN(*values, unit=unit)
    except ValueError as exc:
        raise ConfigError(f"{field}: {exc}") from None


def parse_config(doc) -> RunConfig:
    """Validate a config document (already parsed from JSON)."""
    try:
        jsonschema.validate(doc, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = ".".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"{where}: {exc.message}") from None

    conv, dev, fail = doc["converter"], doc["device"], doc["failure"]
    try:
        thermal = ThermalElectricalParams(
            v_in=conv["v_in_v"],
            v_out=conv["v_out_v"],
            r_ds_on=dev["r_ds_on_ohm"],
            r_th_ja=dev["r_th_ja_c_per_w"],
            e_sw=dev.get("e_sw_j", 0.0),
            f_sw=dev.get("f_sw_hz", 0.0),
            i_ref=dev.get("i_ref_a", 1.0),
            tj_max=dev.get("tj_max_c", 175.0),
        )
    except ValueError as exc:
        raise ConfigError(f"converter/device: {exc}") from None
    lam_b = _tfn(fail["lambda_b_per_1e6h"], "failure.lambda_b_per_1e6h", "1/1e6h")
    try:
        model = FailureModel(lam_b, StressFactors(fail.get("pi_q", 1.0), fail.get("pi_a", 1.0),
                                                  fail.get("pi_e", 1.0)), thermal)
    except ValueError as exc:
        raise ConfigError(f"failure: {exc}") from None

    red = []
    for i, r in enumerate(doc["redundancy"]):
        cov = _tfn(r["coverage"], f"redundancy.{i}.coverage")
        try:
            red.append(RedundancyConfig(r["kind"], cov, r.get("formula_variant", CONSISTENT)))
        except ValueError as exc:
            raise ConfigError(f"redundancy.{i}: {exc}") from None

    fz = doc.get("fuzzy", {})
    sim = doc.get("simulation", {})
    bounds = tuple(doc.get("mission", {}).get("t_ambient_bounds_c", T_AMBIENT_BOUNDS))
    if bounds[0] >= bounds[1]:
        raise ConfigError("mission.t_ambient_bounds_c: lower bound must be below upper bound")
    return RunConfig(
        failure_model=model,
        redundancy=tuple(red),
        method=fz.get("method", ALPHA_CUT),
        alpha_levels=fz.get("alpha_levels", DEFAULT_ALPHA_LEVELS),
        trials=sim.get("trials", 100_000),
        seed=sim.get("seed", 0),
        t_bounds=bounds,
        sha256=canonical_hash(doc),
    )


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    return parse_config(doc)
