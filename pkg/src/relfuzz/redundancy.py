"""Equivalent failure rates of the redundant switch cell and per-mode totals."""

from dataclasses import dataclass

from .fuzzy import TFN, add, crisp, div, mul, propagate_cuts, scale
from .mission import MissionProfile, aggregate_rate

__all__ = [
    "PARALLEL",
    "STANDBY",
    "AS_PRINTED",
    "CONSISTENT",
    "ALPHA_CUT",
    "VERTEX",
    "RedundancyConfig",
    "ModeRates",
    "equivalent_rate_parallel",
    "equivalent_rate_standby",
    "equivalent_rate",
    "mode_totals",
    "normalize_variant",
    "normalize_method",
]

PARALLEL = "parallel"
STANDBY = "standby"
AS_PRINTED = "as-printed"
CONSISTENT = "consistent"
ALPHA_CUT = "alpha-cut"
VERTEX = "vertex"


def _norm(value, choices, what):
    key = str(value).strip().lower().replace("_", "-")
    key = {"asprinted": AS_PRINTED, "alphacut": ALPHA_CUT, "alpha": ALPHA_CUT}.get(key, key)
    if key not in choices:
        raise ValueError(f"unknown {what} {value!r}; expected one of {', '.join(choices)}")
    return key


def normalize_variant(v):
    return _norm(v, (AS_PRINTED, CONSISTENT), "formula variant")


def normalize_method(m):
    return _norm(m, (ALPHA_CUT, VERTEX), "fuzzy method")


@dataclass(frozen=True)
class RedundancyConfig:
    kind: str
    coverage: TFN
    formula_variant: str = CONSISTENT

    def __post_init__(self):
        object.__setattr__(self, "kind", _norm(self.kind, (PARALLEL, STANDBY), "redundancy kind"))
        object.__setattr__(self, "formula_variant", normalize_variant(self.formula_variant))
        if self.coverage.a < 0 or self.coverage.c > 1:
            raise ValueError(f"coverage must lie within [0, 1], got {self.coverage.as_tuple()}")


@dataclass(frozen=True)
class ModeRates:
    lambda_mode2: TFN
    lambda_mode1: TFN
    config: RedundancyConfig


def _parallel_as_printed(h, f, pc):
    return 2.0 * h / (1.0 + 2.0 * f * pc)


def _parallel_consistent(h, f, pc):
    # inverse of the covered hot-pair MTTF 1/(2h) + pc/f; exactly 2h at pc == 0
    return 2.0 * h / (1.0 + 2.0 * h * pc / f)


def _standby(f, pc):
    return f / (1.0 + pc)


def _summary(fn, inputs, unit):
    _, lo, hi = propagate_cuts(fn, inputs, [0.0, 1.0])
    return TFN(lo[0], lo[1], hi[0], unit)


def _check_rates(*rates):
    for r in rates:
        if r.a <= 0:
            raise ZeroDivisionError(f"rates must have strictly positive support, got {r.as_tuple()}")


def equivalent_rate_parallel(lambda_h: TFN, lambda_f: TFN, coverage: TFN,
                             variant: str = CONSISTENT, method: str = ALPHA_CUT) -> TFN:
    """Equivalent rate of a covered hot-parallel switch pair.

    ``as-printed``: ``2 h / (1 + 2 f pc)``. ``consistent``:
    ``2 h f / (f + 2 h pc)``. The two agree only when ``f == 1``.

    With ``method="alpha-cut"`` the summary TFN is the exact image of the
    support box (alpha 0) and peak (alpha 1); both formulas are monotone in
    every argument. ``method="vertex"`` uses vertex arithmetic.
    """
    variant = normalize_variant(variant)
    method = normalize_method(method)
    _check_rates(lambda_h, lambda_f)
    unit = lambda_h.unit
    if method == ALPHA_CUT:
        fn = _parallel_consistent if variant == CONSISTENT else _parallel_as_printed
        return _summary(fn, (lambda_h, lambda_f, coverage), unit)
    h, f, pc = lambda_h.with_unit(""), lambda_f.with_unit(""), coverage.with_unit("")
    if variant == AS_PRINTED:
        out = div(scale(h, 2.0), add(crisp(1.0), scale(mul(f, pc), 2.0)))
    else:
        out = div(scale(mul(h, f), 2.0), add(f, scale(mul(h, pc), 2.0)))
    return out.with_unit(unit)


def equivalent_rate_standby(lambda_f: TFN, coverage: TFN, method: str = ALPHA_CUT) -> TFN:
    """Equivalent rate ``f / (1 + pc)`` of a cold-standby switch pair."""
    method = normalize_method(method)
    _check_rates(lambda_f)
    if method == ALPHA_CUT:
        return _summary(_standby, (lambda_f, coverage), lambda_f.unit)
    out = div(lambda_f.with_unit(""), add(crisp(1.0), coverage.with_unit("")))
    return out.with_unit(lambda_f.unit)


def equivalent_rate(rates, config: RedundancyConfig, method: str = ALPHA_CUT) -> TFN:
    """Equivalent rate of one :class:`~relfuzz.failure.StateModeRates` record."""
    if config.kind == PARALLEL:
        return equivalent_rate_parallel(rates.lambda_h, rates.lambda_f, config.coverage,
                                        config.formula_variant, method)
    return equivalent_rate_standby(rates.lambda_f, config.coverage, method)


def mode_totals(profile: MissionProfile, per_state, config: RedundancyConfig,
                method: str = ALPHA_CUT) -> ModeRates:
    """Profile-aggregated equivalent rates for two-phase and one-phase operation.

    ``per_state`` holds one :class:`~relfuzz.failure.StateModeRates` per
    (state, mode) pair for modes 1 and 2, in any order.
    """
    by_mode = {1: {}, 2: {}}
    for r in per_state:
        if r.mode not in by_mode:
            raise ValueError(f"unexpected operation mode {r.mode}")
        if r.state_index in by_mode[r.mode]:
            raise ValueError(f"duplicate rates for state {r.state_index}, mode {r.mode}")
        by_mode[r.mode][r.state_index] = r
    totals = {}
    for mode, recs in by_mode.items():
        if sorted(recs) != list(range(profile.n)):
            raise ValueError(f"mode {mode}: rates missing for some of the {profile.n} states")
        eq = [equivalent_rate(recs[i], config, method) for i in range(profile.n)]
        totals[mode] = aggregate_rate(profile, eq)
    return ModeRates(totals[2], totals[1], config)
