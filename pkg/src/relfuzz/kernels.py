"""Hot inner loops, each with a numba and a pure-numpy implementation.

Both implementations of :func:`advance_trials` consume the same pre-drawn
random numbers in the same order and perform the same floating-point
operations, so they return bit-identical results. The uniformization kernels
agree to rounding only (libm ``exp``/``lgamma`` differ between backends).
"""

import math

import numpy as np

from ._accel import USE_NUMBA, jit

__all__ = [
    "advance_trials",
    "advance_trials_numpy",
    "advance_trials_numba",
    "uniformized_survival",
    "uniformized_survival_numpy",
    "uniformized_survival_numba",
    "BACKEND",
]


def _advance_loop(state, time, last, expo, unif, exit_rate, exit_cum, absorbing):
    m, steps = expo.shape
    for i in range(m):
        s = state[i]
        t = time[i]
        prev = last[i]
        for j in range(steps):
            if s == absorbing:
                break
            t += expo[i, j] / exit_rate[s]
            u = unif[i, j]
            nxt = 0
            while exit_cum[s, nxt] <= u:
                nxt += 1
            prev = s
            s = nxt
        state[i] = s
        time[i] = t
        last[i] = prev


def advance_trials_numpy(state, time, last, expo, unif, exit_rate, exit_cum, absorbing):
    """Advance every live trial by up to ``expo.shape[1]`` jumps, in place.

    Parameters
    ----------
    state : ndarray of int64, shape (m,)
        Current state per trial.
    time : ndarray of float64, shape (m,)
        Elapsed time per trial.
    last : ndarray of int64, shape (m,)
        State occupied just before the most recent jump.
    expo, unif : ndarray of float64, shape (m, steps)
        Standard exponential and U[0, 1) draws, one pair per jump.
    exit_rate : ndarray, shape (n,)
        Total exit rate per state (unused for the absorbing state).
    exit_cum : ndarray, shape (n, n)
        Row-wise cumulative jump probabilities, last positive entry forced to 1.
    absorbing : int
        Index of the absorbing state.
    """
    for j in range(expo.shape[1]):
        live = np.flatnonzero(state != absorbing)
        if live.size == 0:
            break
        s = state[live]
        time[live] += expo[live, j] / exit_rate[s]
        last[live] = s
        state[live] = (exit_cum[s] <= unif[live, j, None]).sum(axis=1)


advance_trials_numba = jit(_advance_loop)


def _survival_loop(P, p0, transient, lam_t, n_max):
    m = P.shape[0]
    nt = lam_t.shape[0]
    out = np.zeros(nt)
    v = p0.copy()
    w = np.empty(m)
    for n in range(n_max + 1):
        surv = 0.0
        for s in range(m):
            if transient[s]:
                surv += v[s]
        lg = math.lgamma(n + 1.0)
        for k in range(nt):
            x = lam_t[k]
            if x == 0.0:
                if n == 0:
                    out[k] += surv
            else:
                out[k] += math.exp(-x + n * math.log(x) - lg) * surv
        for c in range(m):
            acc = 0.0
            for r in range(m):
                acc += v[r] * P[r, c]
            w[c] = acc
        for c in range(m):
            v[c] = w[c]
    return out


def uniformized_survival_numpy(P, p0, transient, lam_t, n_max):
    """Survival probability ``sum_n Pois(n; lam_t) * (p0 P^n)[transient]``.

    ``P`` is the uniformized jump matrix ``I + Q / lam``; ``lam_t`` holds
    ``lam * t`` for each requested time.
    """
    out = np.zeros(lam_t.shape[0])
    v = p0.copy()
    pos = lam_t > 0.0
    log_x = np.log(lam_t[pos])
    for n in range(n_max + 1):
        surv = v[transient].sum()
        lg = math.lgamma(n + 1.0)
        out[pos] += np.exp(-lam_t[pos] + n * log_x - lg) * surv
        if n == 0:
            out[~pos] += surv
        v = v @ P
    return out


uniformized_survival_numba = jit(_survival_loop)

if USE_NUMBA:
    advance_trials = advance_trials_numba
    uniformized_survival = uniformized_survival_numba
    BACKEND = "numba"
else:
    advance_trials = advance_trials_numpy
    uniformized_survival = uniformized_survival_numpy
    BACKEND = "numpy"
