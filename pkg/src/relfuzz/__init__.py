"""Fuzzy MTTF analysis of a fault-tolerant two-phase interleaved converter."""

__version__ = "0.1.0"

from .fuzzy import (TFN, AlphaInterval, MembershipCurve, add, alpha_cut, crisp, defuzzify_centroid,
                    defuzzify_curve, div, mul, propagate, scale)
from .mission import MissionProfile, MissionState, aggregate_rate, cluster_telemetry, load_profile
from .failure import FailureModel, StressFactors, ThermalElectricalParams, junction_temperature, pi_t, state_mode_rates
from .redundancy import RedundancyConfig, equivalent_rate_parallel, equivalent_rate_standby, mode_totals
from .markov import MarkovChain, build_chain, fuzzy_mttf, mttf_closed_form, mttf_numeric, reliability_curve
from .simulate import SimResult, simulate_fuzzy_envelope, simulate_mttf
