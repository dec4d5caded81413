"""Monte Carlo absorption-time simulation, used as an oracle for the analytic MTTF.

Trials are split into fixed-size blocks. Block ``j`` draws its random numbers
from ``PCG64(SeedSequence(seed, spawn_key=(j,)))``, so results depend only on
``(seed, trials, chain)`` and not on how many worker threads process the
blocks.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import itertools
import math

import numpy as np

from . import kernels
from ._accel import worker_count
from .fuzzy import TFN, MembershipCurve, alpha_cut, uniform_alphas
from .markov import MarkovChain, build_chain, mode_label

__all__ = [
    "SimResult",
    "FuzzyEnvelope",
    "simulate_mttf",
    "simulate_fuzzy_envelope",
    "BLOCK_SIZE",
    "GENERATOR",
    "Z95",
]

BLOCK_SIZE = 1 << 16
GENERATOR = "numpy PCG64, SeedSequence(seed, spawn_key=(block,)), 65536 trials per block"
Z95 = 1.959963984540054


@dataclass(frozen=True)
class SimResult:
    trials: int
    mean_mttf: float
    std_error: float
    ci95: tuple
    seed: int
    absorbed_from: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")

    def covers(self, value: float) -> bool:
        return self.ci95[0] <= value <= self.ci95[1]

    def to_dict(self):
        return {
            "trials": self.trials,
            "mean_mttf_years": self.mean_mttf,
            "std_error_years": self.std_error,
            "ci95_years": list(self.ci95),
            "seed": self.seed,
            "absorbed_from": dict(self.absorbed_from),
            "generator": GENERATOR,
        }


def _jump_tables(chain: MarkovChain):
    q = chain.generator
    n = q.shape[0]
    out = -np.diag(q).copy()
    cum = np.zeros((n, n))
    for s in range(n):
        if s == chain.absorbing:
            cum[s, :] = 1.0
            continue
        p = np.where(np.arange(n) == s, 0.0, q[s]) / out[s]
        c = np.cumsum(p)
        last = int(np.flatnonzero(p > 0)[-1])
        c[last:] = 1.0
        cum[s] = c
    out[chain.absorbing] = 1.0
    return out, cum


def _run_block(block, m, seed, start, exit_rate, exit_cum, absorbing, steps, advance):
    gen = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))
    state = np.full(m, start, dtype=np.int64)
    time = np.zeros(m)
    last = np.full(m, -1, dtype=np.int64)
    live = np.arange(m)
    while live.size:
        expo = gen.standard_exponential((live.size, steps))
        unif = gen.random((live.size, steps))
        s, t, l = state[live], time[live], last[live]
        advance(s, t, l, expo, unif, exit_rate, exit_cum, absorbing)
        state[live], time[live], last[live] = s, t, l
        live = live[s != absorbing]
    return time, last


def _longest_path(chain):
    # transient count bounds the jumps of an acyclic chain; cyclic chains just loop more
    return max(1, int(chain.transient.sum()))


def simulate_mttf(chain: MarkovChain, trials: int = 10**6, seed: int = 0, start=0,
                  workers=None, backend=None) -> SimResult:
    """Simulate ``trials`` absorption times of ``chain`` from ``start``.

    Parameters
    ----------
    workers : int, optional
        Thread count; capped by ``RELFUZZ_THREADS``. Does not affect results.
    backend : {"numba", "numpy"}, optional
        Kernel override; defaults to the import-time selection.

    Returns
    -------
    SimResult
        Mean, standard error and normal-approximation 95 % interval.
    """
    trials = int(trials)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if backend is None:
        advance = kernels.advance_trials
    elif backend == "numba":
        if kernels.advance_trials_numba is None:
            raise RuntimeError("numba is not available")
        advance = kernels.advance_trials_numba
    elif backend == "numpy":
        advance = kernels.advance_trials_numpy
    else:
        raise ValueError(f"unknown backend {backend!r}")

    s0 = chain.index(start)
    exit_rate, exit_cum = _jump_tables(chain)
    steps = _longest_path(chain)
    sizes = [BLOCK_SIZE] * (trials // BLOCK_SIZE)
    if trials % BLOCK_SIZE:
        sizes.append(trials % BLOCK_SIZE)

    def job(j):
        return _run_block(j, sizes[j], seed, s0, exit_rate, exit_cum, chain.absorbing, steps, advance)

    n_workers = min(worker_count(workers), len(sizes))
    if n_workers == 1:
        parts = [job(j) for j in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            parts = list(pool.map(job, range(len(sizes))))

    times = np.concatenate([p[0] for p in parts])
    last = np.concatenate([p[1] for p in parts])
    mean = math.fsum(times) / trials
    if trials > 1:
        var = math.fsum((times - mean) ** 2) / (trials - 1)
        se = math.sqrt(var / trials)
    else:
        se = 0.0
    counts = np.bincount(last[last >= 0], minlength=len(chain.states))
    absorbed_from = {chain.states[i]: int(counts[i]) for i in range(len(chain.states)) if i != chain.absorbing}
    return SimResult(trials, mean, se, (mean - Z95 * se, mean + Z95 * se), int(seed), absorbed_from)


@dataclass(frozen=True, eq=False)
class FuzzyEnvelope:
    """Per-level min/max of simulated MTTF over the alpha-box corners."""

    alphas: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    lo_se: np.ndarray
    hi_se: np.ndarray

    @property
    def curve(self) -> MembershipCurve:
        lo = np.minimum.accumulate(self.lo[::-1])[::-1]
        hi = np.maximum.accumulate(self.hi[::-1])[::-1]
        return MembershipCurve.from_cuts(self.alphas, lo, hi, "yr")


def _corners(x: TFN, alpha):
    cut = alpha_cut(x, float(alpha))
    return sorted({cut.lo, cut.hi})


def simulate_fuzzy_envelope(lambda2: TFN, lambda1: TFN, coverage: TFN, alpha_levels=None,
                            trials_per_corner: int = 10**5, seed: int = 0, workers=None) -> FuzzyEnvelope:
    """Simulated MTTF envelope of the two-phase chain at every alpha level.

    Every corner of each alpha box is simulated with the same ``seed``
    (common random numbers), so a crisp input collapses the envelope to the
    single :func:`simulate_mttf` result.
    """
    if alpha_levels is None:
        alpha_levels = uniform_alphas(11)
    alphas = np.unique(np.asarray(alpha_levels, dtype=float))
    if alphas.size == 0:
        raise ValueError("alpha_levels must not be empty")
    cache = {}
    lo, hi, lo_se, hi_se = [], [], [], []
    for alpha in alphas:
        results = []
        for l2, l1, pc in itertools.product(_corners(lambda2, alpha), _corners(lambda1, alpha),
                                            _corners(coverage, alpha)):
            key = (l2, l1, pc)
            if key not in cache:
                chain = build_chain(2, {2: l2, 1: l1}, pc)
                cache[key] = simulate_mttf(chain, trials_per_corner, seed, start=mode_label(2),
                                           workers=workers)
            results.append(cache[key])
        r_lo = min(results, key=lambda r: r.mean_mttf)
        r_hi = max(results, key=lambda r: r.mean_mttf)
        lo.append(r_lo.mean_mttf)
        hi.append(r_hi.mean_mttf)
        lo_se.append(r_lo.std_error)
        hi_se.append(r_hi.std_error)
    return FuzzyEnvelope(alphas, np.array(lo), np.array(hi), np.array(lo_se), np.array(hi_se))
