"""Part-stress fuzzy failure rates of the power switches per mission state.

The temperature factor is an Arrhenius term normalized to 1 at 25 degC with
activation constant 1925 K. Switch losses are conduction plus linearized
switching loss of a boost-converter switch.
"""

from dataclasses import dataclass
import math
import warnings

from .fuzzy import TFN, scale
from .mission import MissionState

__all__ = [
    "StressFactors",
    "ThermalElectricalParams",
    "FailureModel",
    "StateModeRates",
    "JunctionLimitWarning",
    "junction_temperature",
    "switch_loss",
    "pi_t",
    "state_mode_rates",
    "DEFAULT_LAMBDA_B",
    "ARRHENIUS_K",
]

ARRHENIUS_K = 1925.0
T_REF_K = 298.0
# configuration default, failures per 1e6 h
DEFAULT_LAMBDA_B = TFN(0.012, 0.020, 0.034, "1/1e6h")


class JunctionLimitWarning(UserWarning):
    pass


@dataclass(frozen=True)
class StressFactors:
    pi_q: float = 1.0
    pi_a: float = 1.0
    pi_e: float = 1.0

    def __post_init__(self):
        for name in ("pi_q", "pi_a", "pi_e"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be strictly positive, got {v}")

    @property
    def product(self) -> float:
        return self.pi_q * self.pi_a * self.pi_e


@dataclass(frozen=True)
class ThermalElectricalParams:
    """Converter and switch data feeding the junction-temperature estimate.

    ``e_sw`` is the switching energy per cycle at current ``i_ref``.
    """

    v_in: float
    v_out: float
    r_ds_on: float
    r_th_ja: float
    e_sw: float = 0.0
    f_sw: float = 0.0
    i_ref: float = 1.0
    tj_max: float = 175.0

    def __post_init__(self):
        if not 0 < self.v_in < self.v_out:
            raise ValueError(f"need 0 < v_in < v_out, got v_in={self.v_in}, v_out={self.v_out}")
        if self.r_ds_on < 0 or self.r_th_ja <= 0:
            raise ValueError("r_ds_on must be >= 0 and r_th_ja > 0")
        if self.e_sw < 0 or self.f_sw < 0 or self.i_ref <= 0:
            raise ValueError("e_sw and f_sw must be >= 0 and i_ref > 0")

    @property
    def duty(self) -> float:
        return 1.0 - self.v_in / self.v_out


@dataclass(frozen=True)
class FailureModel:
    lambda_b: TFN
    factors: StressFactors
    thermal: ThermalElectricalParams

    def __post_init__(self):
        if self.lambda_b.a <= 0:
            raise ValueError("base failure rate must have a strictly positive support")


@dataclass(frozen=True)
class StateModeRates:
    """Healthy-path and faulty-path fuzzy rates of one state in one mode."""

    state_index: int
    mode: int
    lambda_h: TFN
    lambda_f: TFN
    tj_h: float
    tj_f: float
    tj_limit_exceeded: bool = False


def switch_loss(power: float, phases_sharing: int, params: ThermalElectricalParams) -> float:
    """Conduction plus switching loss (W) of one device."""
    if phases_sharing < 1:
        raise ValueError("phases_sharing must be >= 1")
    if power < 0:
        raise ValueError(f"power must be nonnegative, got {power}")
    i = power / (phases_sharing * params.v_in)
    return params.r_ds_on * params.duty * i * i + params.e_sw * params.f_sw * (i / params.i_ref)


def junction_temperature(state: MissionState, phases_sharing: int, params: ThermalElectricalParams) -> float:
    """Steady-state junction temperature (degC) of one switch.

    The device current is ``power / (phases_sharing * v_in)``. Exceeding
    ``params.tj_max`` issues a :class:`JunctionLimitWarning`.
    """
    tj = state.t_ambient + params.r_th_ja * switch_loss(state.power, phases_sharing, params)
    if tj > params.tj_max:
        warnings.warn(
            f"junction temperature {tj:.1f} degC exceeds limit {params.tj_max} degC "
            f"at ({state.t_ambient} degC, {state.power} W)",
            JunctionLimitWarning,
            stacklevel=2,
        )
    return tj


def pi_t(tj: float) -> float:
    if tj <= -273.0:
        raise ValueError(f"temperature below absolute zero: {tj}")
    return math.exp(-ARRHENIUS_K * (1.0 / (tj + 273.0) - 1.0 / T_REF_K))


def state_mode_rates(model: FailureModel, state: MissionState, mode: int,
                     kind: str = "parallel", state_index: int = 0) -> StateModeRates:
    """Fuzzy healthy/faulty switch rates for one state in operation mode ``mode``.

    ``mode`` phases share the converter current. In a parallel cell the
    healthy pair splits the phase current; in a standby cell the primary
    carries it alone. The faulty path is always one device with the full
    phase current.
    """
    if mode < 1:
        raise ValueError(f"operation mode must be >= 1, got {mode}")
    if kind not in ("parallel", "standby"):
        raise ValueError(f"unknown redundancy kind {kind!r}")
    th = model.thermal
    healthy_sharing = 2 * mode if kind == "parallel" else mode
    tj_h = junction_temperature(state, healthy_sharing, th)
    tj_f = junction_temperature(state, mode, th)
    k = model.factors.product
    return StateModeRates(
        state_index=state_index,
        mode=mode,
        lambda_h=scale(model.lambda_b, k * pi_t(tj_h)),
        lambda_f=scale(model.lambda_b, k * pi_t(tj_f)),
        tj_h=tj_h,
        tj_f=tj_f,
        tj_limit_exceeded=max(tj_h, tj_f) > th.tj_max,
    )
