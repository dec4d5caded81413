"""End-to-end analysis: mission profile -> switch rates -> cell rates -> fuzzy MTTF.

Failure rates enter in failures per 1e6 h and are converted to failures per
year before the Markov layer.
"""

import hashlib
import json
import math
from pathlib import Path
import platform

import numpy as np

from . import __version__, reference
from .config import ConfigError, RunConfig
from .failure import state_mode_rates
from .fuzzy import TFN, crisp, defuzzify_curve, scale
from .markov import build_chain, fuzzy_mttf, mode_label, mttf_closed_form
from .mission import MissionProfile, ProfileError
from .redundancy import ALPHA_CUT, VERTEX, mode_totals
from .simulate import GENERATOR, simulate_mttf

__all__ = [
    "HOURS_PER_YEAR",
    "per_1e6h_to_per_year",
    "parse_rates_override",
    "analyze",
    "simulate_configs",
    "format_report",
    "canonical_json",
    "plot_rows",
    "render_svg",
]

HOURS_PER_YEAR = 8760.0


def per_1e6h_to_per_year(x: TFN) -> TFN:
    return scale(x, HOURS_PER_YEAR / 1e6).with_unit("1/yr")


def parse_rates_override(text):
    """Parse a rates override given inline as JSON or as a path to a JSON file.

    Layout::

        {"unit": "per_year" | "per_1e6h",
         "parallel": {"lambda_mode2": [a, b, c], "lambda_mode1": [a, b, c]},
         "standby": {...}}

    Returns a mapping kind -> (lambda_mode2, lambda_mode1) in failures per year.
    """
    if text is None:
        return {}
    p = Path(text)
    try:
        raw = p.read_text(encoding="utf-8") if p.is_file() else text
        doc = json.loads(raw)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"--rates-override: not a JSON document or file ({exc})") from None
    if not isinstance(doc, dict):
        raise ConfigError("--rates-override: expected a JSON object")
    unit = doc.get("unit", "per_year")
    if unit not in ("per_year", "per_1e6h"):
        raise ConfigError(f"--rates-override.unit: expected per_year or per_1e6h, got {unit!r}")
    out = {}
    for kind, body in doc.items():
        if kind == "unit":
            continue
        if kind not in ("parallel", "standby") or not isinstance(body, dict):
            raise ConfigError(f"--rates-override.{kind}: unknown configuration kind")
        pair = []
        for key in ("lambda_mode2", "lambda_mode1"):
            try:
                vals = body[key]
                x = TFN(*vals, unit="1/1e6h" if unit == "per_1e6h" else "1/yr")
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError(f"--rates-override.{kind}.{key}: {exc}") from None
            if x.a <= 0:
                raise ConfigError(f"--rates-override.{kind}.{key}: rates must be strictly positive")
            pair.append(per_1e6h_to_per_year(x) if unit == "per_1e6h" else x)
        out[kind] = tuple(pair)
    return out


def _sha256_file(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest() if path else None


def _totals(cfg: RunConfig, red, profile: MissionProfile):
    per_state = []
    for i, state in enumerate(profile):
        for mode in (1, 2):
            per_state.append(state_mode_rates(cfg.failure_model, state, mode, red.kind, state_index=i))
    totals = mode_totals(profile, per_state, red, cfg.method)
    hot = sorted({r.state_index for r in per_state if r.tj_limit_exceeded})
    return totals.lambda_mode2, totals.lambda_mode1, hot


def _mttf_block(fm, curve_centroid=True):
    a, b, c = fm.tfn_summary.as_tuple()
    out = {"method": fm.method, "tfn": [a, b, c], "lowest": a, "highest": c, "defuzzified": fm.defuzzified}
    if curve_centroid and fm.curve.support[1] > fm.curve.support[0]:
        out["curve_centroid"] = defuzzify_curve(fm.curve)
    return out


def _mc_block(l2: TFN, l1: TFN, cov: TFN, trials, seed, workers):
    chain = build_chain(2, {2: l2.b, 1: l1.b}, cov.b)
    analytic = mttf_closed_form(l2.b, l1.b, cov.b)
    sim = simulate_mttf(chain, trials, seed, start=mode_label(2), workers=workers)
    diff = abs(sim.mean_mttf - analytic)
    return {
        "chain_rates_per_year": {"lambda_mode2": l2.b, "lambda_mode1": l1.b, "p_c": cov.b},
        "analytic_mttf_years": analytic,
        "simulation": sim.to_dict(),
        "abs_diff_years": diff,
        "within_3se": bool(diff <= 3.0 * sim.std_error),
    }


def analyze(cfg: RunConfig, profile: MissionProfile = None, overrides=None, workers=None,
            profile_path=None):
    """Run the full pipeline for every redundancy configuration in ``cfg``.

    Returns
    -------
    report : dict
        Plain JSON-ready data (see :func:`format_report`).
    curves : list of (label, MembershipCurve)
        Fuzzy MTTF membership polylines per configuration.
    """
    overrides = overrides or {}
    configs, curves = [], []
    for idx, red in enumerate(cfg.redundancy):
        entry = {"index": idx, "kind": red.kind, "coverage": list(red.coverage.as_tuple()),
                 "formula_variant": red.formula_variant}
        if red.kind in overrides:
            l2, l1 = overrides[red.kind]
            entry["rates_source"] = "override"
            hot = []
        else:
            if profile is None:
                raise ProfileError(f"no mission profile given and no rates override for {red.kind!r}")
            l2_h, l1_h, hot = _totals(cfg, red, profile)
            entry["rates_source"] = "profile"
            entry["totals_per_1e6h"] = {"lambda_mode2": list(l2_h.as_tuple()),
                                        "lambda_mode1": list(l1_h.as_tuple())}
            l2, l1 = per_1e6h_to_per_year(l2_h), per_1e6h_to_per_year(l1_h)
        entry["totals_per_year"] = {"lambda_mode2": list(l2.as_tuple()), "lambda_mode1": list(l1.as_tuple())}
        entry["junction_limit_exceeded_states"] = hot

        primary = fuzzy_mttf(l2, l1, red.coverage, cfg.method, cfg.alpha_levels)
        other = fuzzy_mttf(l2, l1, red.coverage, VERTEX if cfg.method == ALPHA_CUT else ALPHA_CUT,
                           cfg.alpha_levels)
        entry["mttf_years"] = _mttf_block(primary)
        entry["mttf_years_alternate"] = _mttf_block(other, curve_centroid=False)
        entry["monte_carlo"] = _mc_block(l2, l1, red.coverage, cfg.trials, cfg.seed, workers)
        configs.append(entry)
        curves.append((f"{idx}_{red.kind}", primary.curve))

    ref = {"note": reference.DISCREPANCY_NOTE, "reproducible": False, "rows": {}}
    for kind, tot in reference.TOTALS.items():
        l2, l1 = tot["lambda_mode2"], tot["lambda_mode1"]
        peak = fuzzy_mttf(l2, l1, crisp(1.0)).tfn_summary.b
        ref["rows"][kind] = {
            "reference_allocation_years": dict(reference.ALLOCATION[kind]),
            "reference_totals": {"lambda_mode2": list(l2.as_tuple()), "lambda_mode1": list(l1.as_tuple())},
            "peak_mttf_from_reference_totals_years": peak,
        }

    report = {
        "schema": 1,
        "configurations": configs,
        "reference_comparison": ref,
        "provenance": {
            "tool": "relfuzz",
            "version": __version__,
            "numpy": np.__version__,
            "python": platform.python_version(),
            "config_sha256": cfg.sha256,
            "profile_sha256": _sha256_file(profile_path),
            "seed": cfg.seed,
            "trials": cfg.trials,
            "generator": GENERATOR,
            "fuzzy_method": cfg.method,
            "alpha_levels": cfg.alpha_levels,
        },
    }
    return report, curves


def simulate_configs(cfg: RunConfig, profile=None, overrides=None, trials=None, seed=None, workers=None):
    """Crisp chain at the TFN peaks of each configuration, analytic vs simulated."""
    overrides = overrides or {}
    trials = cfg.trials if trials is None else trials
    seed = cfg.seed if seed is None else seed
    out = []
    for idx, red in enumerate(cfg.redundancy):
        if red.kind in overrides:
            l2, l1 = overrides[red.kind]
        else:
            if profile is None:
                raise ProfileError(f"no mission profile given and no rates override for {red.kind!r}")
            l2_h, l1_h, _ = _totals(cfg, red, profile)
            l2, l1 = per_1e6h_to_per_year(l2_h), per_1e6h_to_per_year(l1_h)
        block = _mc_block(l2, l1, red.coverage, trials, seed, workers)
        out.append({"index": idx, "kind": red.kind, **block})
    return {"schema": 1, "configurations": out,
            "provenance": {"tool": "relfuzz", "version": __version__, "seed": seed, "trials": trials,
                           "generator": GENERATOR}}


def _round(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if not math.isfinite(v):
            raise ArithmeticError(f"non-finite value {v} in report")
        return float(f"{v:.6g}")
    if isinstance(obj, dict):
        return {str(k): _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def canonical_json(doc) -> str:
    """Sorted keys, floats rounded to 6 significant digits, trailing newline."""
    return json.dumps(_round(doc), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


format_report = canonical_json


def plot_rows(curve):
    lines = ["x_years,mu"]
    lines += [f"{x:.10g},{m:.10g}" for x, m in zip(curve.x, curve.mu)]
    return "\n".join(lines) + "\n"


def render_svg(curve, title="", width=480, height=240, pad=30):
    """Minimal standalone SVG rendering of a membership polyline."""
    x0, x1 = curve.support
    span = (x1 - x0) or 1.0
    pts = " ".join(
        f"{pad + (x - x0) / span * (width - 2 * pad):.2f},{height - pad - m * (height - 2 * pad):.2f}"
        for x, m in zip(curve.x, curve.mu)
    )
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">\n'
        f'  <title>{title}</title>\n'
        f'  <line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>\n'
        f'  <line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>\n'
        f'  <polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{pts}"/>\n'
        f'  <text x="{pad}" y="{height - 8}" font-size="10">{x0:.4g}</text>\n'
        f'  <text x="{width - pad}" y="{height - 8}" font-size="10" text-anchor="end">{x1:.4g} yr</text>\n'
        "</svg>\n"
    )
