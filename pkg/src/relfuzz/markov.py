"""Absorbing Markov chains of the k-phase converter and their MTTF.

Rates in this module are per year and times are in years.
"""

from dataclasses import dataclass
from collections.abc import Mapping
import math

import numpy as np

from . import kernels
from .fuzzy import (TFN, MembershipCurve, add, crisp, defuzzify_centroid, div, mul,
                    propagate_cuts, scale, uniform_alphas, DEFAULT_ALPHA_LEVELS)
from .redundancy import ALPHA_CUT, normalize_method

__all__ = [
    "MarkovChain",
    "FuzzyMttf",
    "SingularChainError",
    "FAIL",
    "mode_label",
    "build_chain",
    "mttf_numeric",
    "mttf_closed_form",
    "fuzzy_mttf",
    "reliability_curve",
    "survival_horizon",
]

FAIL = "fail"


class SingularChainError(np.linalg.LinAlgError):
    pass


def mode_label(k: int) -> str:
    return f"mode{k}"


@dataclass(frozen=True, eq=False)
class MarkovChain:
    """Continuous-time chain with exactly one absorbing state.

    ``transitions`` holds ``(from_label, to_label, rate)`` triples; zero
    rates are kept (they document edges that are structurally present but
    switched off, e.g. uncovered failures at perfect coverage).
    """

    states: tuple
    transitions: tuple

    def __post_init__(self):
        states = tuple(self.states)
        if len(set(states)) != len(states) or not states:
            raise ValueError("chain states must be unique and non-empty")
        index = {s: i for i, s in enumerate(states)}
        trans = []
        for src, dst, rate in self.transitions:
            if src not in index or dst not in index:
                raise ValueError(f"transition {src!r}->{dst!r} references an unknown state")
            if src == dst:
                raise ValueError(f"self-transition on {src!r}")
            rate = float(rate)
            if not (math.isfinite(rate) and rate >= 0):
                raise ValueError(f"transition {src!r}->{dst!r} has invalid rate {rate}")
            trans.append((src, dst, rate))
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "transitions", tuple(trans))

        q = np.zeros((len(states), len(states)))
        for src, dst, rate in trans:
            q[index[src], index[dst]] += rate
        np.fill_diagonal(q, -q.sum(axis=1))
        absorbing = np.flatnonzero(np.diag(q) == 0)
        if absorbing.size != 1:
            raise ValueError(f"chain must have exactly one absorbing state, found {absorbing.size}")
        self._check_reachability(q, int(absorbing[0]))
        q.setflags(write=False)
        object.__setattr__(self, "_q", q)
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "absorbing", int(absorbing[0]))

    @staticmethod
    def _check_reachability(q, absorbing):
        reach = {absorbing}
        changed = True
        while changed:
            changed = False
            for i in range(q.shape[0]):
                if i not in reach and any(q[i, j] > 0 for j in reach):
                    reach.add(i)
                    changed = True
        if len(reach) != q.shape[0]:
            raise SingularChainError("some operational states cannot reach the absorbing state")

    @property
    def generator(self) -> np.ndarray:
        return self._q

    @property
    def transient(self) -> np.ndarray:
        mask = np.ones(len(self.states), dtype=bool)
        mask[self.absorbing] = False
        return mask

    def index(self, state) -> int:
        if isinstance(state, (int, np.integer)):
            if not 0 <= state < len(self.states):
                raise IndexError(f"state index {state} out of range")
            return int(state)
        return self._index[state]

    def rate(self, src, dst) -> float:
        return float(self._q[self.index(src), self.index(dst)])


def build_chain(phase_count: int, lambda_per_mode, p_c: float) -> MarkovChain:
    """Chain of a ``phase_count``-phase converter with covered phase failures.

    Parameters
    ----------
    phase_count : int
        Number of phases K when healthy.
    lambda_per_mode : sequence or mapping
        Per-phase failure rate in each operation mode. A sequence is read in
        state order, i.e. ``[lambda_K, ..., lambda_1]``; a mapping is keyed by
        mode ``k``.
    p_c : float
        Coverage: probability that a phase failure is isolated successfully.

    Returns
    -------
    MarkovChain
        States ``mode{K}, ..., mode1, fail``. Mode ``k > 1`` moves to
        ``k - 1`` at ``k p_c lambda_k`` and to ``fail`` at
        ``k (1 - p_c) lambda_k``; mode 1 fails at ``lambda_1``.
    """
    if phase_count < 1:
        raise ValueError("phase_count must be >= 1")
    if not 0.0 <= p_c <= 1.0:
        raise ValueError(f"coverage must lie in [0, 1], got {p_c}")
    if isinstance(lambda_per_mode, Mapping):
        lam = {int(k): float(v) for k, v in lambda_per_mode.items()}
    else:
        seq = [float(v) for v in lambda_per_mode]
        if len(seq) != phase_count:
            raise ValueError(f"expected {phase_count} per-mode rates, got {len(seq)}")
        lam = {phase_count - i: v for i, v in enumerate(seq)}
    if sorted(lam) != list(range(1, phase_count + 1)):
        raise ValueError(f"need a rate for every mode 1..{phase_count}")
    for k, v in lam.items():
        if not (math.isfinite(v) and v > 0):
            raise ValueError(f"rate for mode {k} must be strictly positive, got {v}")

    states = [mode_label(k) for k in range(phase_count, 0, -1)] + [FAIL]
    trans = []
    for k in range(phase_count, 1, -1):
        trans.append((mode_label(k), mode_label(k - 1), k * p_c * lam[k]))
        trans.append((mode_label(k), FAIL, k * (1.0 - p_c) * lam[k]))
    trans.append((mode_label(1), FAIL, lam[1]))
    return MarkovChain(tuple(states), tuple(trans))


def mttf_numeric(chain: MarkovChain, start=0) -> float:
    """Expected absorption time from ``start`` by solving ``-Q_TT t = 1``."""
    tr = chain.transient
    q_tt = chain.generator[np.ix_(tr, tr)]
    try:
        t = np.linalg.solve(-q_tt, np.ones(q_tt.shape[0]))
    except np.linalg.LinAlgError as exc:
        raise SingularChainError(str(exc)) from exc
    s = chain.index(start)
    if s == chain.absorbing:
        return 0.0
    return float(t[np.flatnonzero(tr).tolist().index(s)])


def mttf_closed_form(lambda2: float, lambda1: float, p_c: float) -> float:
    """MTTF ``(1 + 2 lambda2 p_c / lambda1) / (2 lambda2)`` of the two-phase chain."""
    if not (lambda2 > 0 and lambda1 > 0):
        raise ValueError("rates must be strictly positive")
    if not 0.0 <= p_c <= 1.0:
        raise ValueError(f"coverage must lie in [0, 1], got {p_c}")
    return (1.0 + (2.0 * lambda2 / lambda1) * p_c) / (2.0 * lambda2)


def _closed_form_array(lambda2, lambda1, p_c):
    return (1.0 + (2.0 * lambda2 / lambda1) * p_c) / (2.0 * lambda2)


@dataclass(frozen=True)
class FuzzyMttf:
    tfn_summary: TFN
    curve: MembershipCurve
    defuzzified: float
    method: str


def fuzzy_mttf(lambda2: TFN, lambda1: TFN, coverage: TFN, method: str = ALPHA_CUT,
               levels: int = DEFAULT_ALPHA_LEVELS) -> FuzzyMttf:
    """Fuzzy MTTF (years) of the two-phase converter from fuzzy per-mode rates.

    ``alpha-cut`` evaluates the closed form over the alpha boxes of the
    inputs; since MTTF is monotone in each argument the corner evaluation is
    exact. ``vertex`` pushes the triples through the closed form with vertex
    arithmetic instead.
    """
    method = normalize_method(method)
    for name, r in (("lambda2", lambda2), ("lambda1", lambda1)):
        if r.a <= 0:
            raise ValueError(f"{name} must have strictly positive support")
    if coverage.a < 0 or coverage.c > 1:
        raise ValueError("coverage must lie within [0, 1]")
    if method == ALPHA_CUT:
        alphas, lo, hi = propagate_cuts(_closed_form_array, (lambda2, lambda1, coverage),
                                        uniform_alphas(levels))
        summary = TFN(lo[0], lo[-1], hi[0], "yr")
        curve = MembershipCurve.from_cuts(alphas, lo, hi, "yr")
    else:
        l2, l1, pc = lambda2.with_unit(""), lambda1.with_unit(""), coverage.with_unit("")
        two_l2 = scale(l2, 2.0)
        num = add(crisp(1.0), mul(div(two_l2, l1), pc))
        summary = div(num, two_l2).with_unit("yr")
        curve = MembershipCurve.from_tfn(summary, levels)
    return FuzzyMttf(summary, curve, defuzzify_centroid(summary), method)


def _two_state_analytic(chain, start, t):
    q = chain.generator
    tr = np.flatnonzero(chain.transient)
    s = chain.index(start)
    if s == chain.absorbing:
        return np.zeros_like(t)
    r_a = -q[s, s]
    p_a = np.exp(-r_a * t)
    others = [i for i in tr if i != s]
    if not others:
        return p_a
    b = others[0]
    r_ab = q[s, b]
    if r_ab == 0.0:
        return p_a
    r_b = -q[b, b]
    d = abs(r_a - r_b)
    m = min(r_a, r_b)
    if d == 0.0:
        p_b = r_ab * t * np.exp(-m * t)
    else:
        p_b = r_ab * np.exp(-m * t) * (-np.expm1(-d * t)) / d
    return p_a + p_b


def _uniformized(chain, start, t):
    q = chain.generator
    lam = float(np.max(-np.diag(q)))
    p0 = np.zeros(q.shape[0])
    p0[chain.index(start)] = 1.0
    if lam == 0.0:
        return np.full_like(t, float(chain.transient[chain.index(start)]))
    P = np.eye(q.shape[0]) + q / lam
    lam_t = lam * t
    top = float(lam_t.max()) if lam_t.size else 0.0
    n_max = int(math.ceil(top + 10.0 * math.sqrt(top) + 30.0))
    return kernels.uniformized_survival(np.ascontiguousarray(P), p0, chain.transient, lam_t, n_max)


def _expm(chain, start, t):
    from scipy.linalg import expm

    q = chain.generator
    s = chain.index(start)
    tr = chain.transient
    return np.array([expm(q * ti)[s, tr].sum() for ti in t])


def reliability_curve(chain: MarkovChain, t_grid, start=0, method: str = "auto") -> np.ndarray:
    """Survival probability ``R(t)`` on ``t_grid``.

    Parameters
    ----------
    method : {"auto", "analytic", "uniformization", "expm"}
        ``auto`` uses the closed-form exponential solution for chains with at
        most two operational states and no back edges, uniformization
        otherwise.

    Returns
    -------
    ndarray, shape (len(t_grid), 2)
        Columns ``t`` and ``R(t)``.
    """
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1:
        raise ValueError("t_grid must be one-dimensional")
    if t.size and (t[0] < 0 or np.any(np.diff(t) < 0)):
        raise ValueError("t_grid must be nonnegative and nondecreasing")
    if method == "auto":
        method = "analytic" if _analytic_ok(chain) else "uniformization"
    if method == "analytic":
        if not _analytic_ok(chain):
            raise ValueError("analytic solution covers acyclic chains with at most two operational states")
        r = _two_state_analytic(chain, start, t)
    elif method == "uniformization":
        r = _uniformized(chain, start, t)
    elif method == "expm":
        r = _expm(chain, start, t)
    else:
        raise ValueError(f"unknown method {method!r}")
    r = np.clip(r, 0.0, 1.0)
    if r.size:
        r = np.minimum.accumulate(r)
    return np.column_stack([t, r])


def _analytic_ok(chain):
    tr = np.flatnonzero(chain.transient)
    if tr.size <= 1:
        return True
    if tr.size > 2:
        return False
    q = chain.generator
    return not (q[tr[0], tr[1]] > 0 and q[tr[1], tr[0]] > 0)


def survival_horizon(chain: MarkovChain, threshold: float = 1e-9, start=0) -> float:
    """Smallest power-of-two multiple of the MTTF at which ``R`` drops below ``threshold``."""
    t = max(mttf_numeric(chain, start), 1e-12)
    for _ in range(200):
        if reliability_curve(chain, [t], start)[0, 1] < threshold:
            return t
        t *= 2.0
    raise RuntimeError("survival did not decay below threshold")
