"""Compare the numba and pure-numpy kernels.

    python3 benchmarks/bench_kernels.py [--trials N] [--repeat R]

Prints the best-of-R wall time per kernel and checks that both backends
produce the same numbers.
"""

import argparse
import time

import numpy as np

from relfuzz import kernels
from relfuzz.markov import build_chain
from relfuzz.simulate import simulate_mttf


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def bench_simulation(trials, repeat, phases):
    chain = build_chain(phases, list(np.linspace(phases, 1.0, phases)), 0.9)
    rows = []
    for backend in ("numpy", "numba"):
        simulate_mttf(chain, 1000, seed=0, backend=backend, workers=1)  # warm-up / compile
        t, res = best_of(lambda: simulate_mttf(chain, trials, seed=1, backend=backend, workers=1), repeat)
        rows.append((f"simulate_mttf K={phases}", backend, t, res.mean_mttf))
    return rows


def bench_uniformization(points, repeat):
    chain = build_chain(4, [4.0, 3.0, 2.0, 1.0], 0.8)
    q = chain.generator
    lam = float(np.max(-np.diag(q)))
    P = np.ascontiguousarray(np.eye(q.shape[0]) + q / lam)
    p0 = np.zeros(q.shape[0])
    p0[0] = 1.0
    lam_t = lam * np.linspace(0.0, 20.0, points)
    n_max = int(np.ceil(lam_t[-1] + 10 * np.sqrt(lam_t[-1]) + 30))
    rows = []
    for name, fn in (("numpy", kernels.uniformized_survival_numpy), ("numba", kernels.uniformized_survival_numba)):
        fn(P, p0, chain.transient, lam_t[:2], 5)
        t, out = best_of(lambda: fn(P, p0, chain.transient, lam_t, n_max), repeat)
        rows.append((f"uniformized_survival {points} pts", name, t, float(out.sum())))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=10**6)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--points", type=int, default=2000)
    args = ap.parse_args()
    if kernels.advance_trials_numba is None:
        raise SystemExit("numba is not installed; nothing to compare")

    rows = bench_simulation(args.trials, args.repeat, 2)
    rows += bench_simulation(args.trials, args.repeat, 4)
    rows += bench_uniformization(args.points, args.repeat)
    print(f"{'kernel':<34} {'backend':<7} {'seconds':>9}  checksum")
    for name, backend, t, check in rows:
        print(f"{name:<34} {backend:<7} {t:9.4f}  {check:.12g}")
    for i in range(0, len(rows), 2):
        (name, _, t_np, c_np), (_, _, t_nb, c_nb) = rows[i], rows[i + 1]
        same = "identical" if c_np == c_nb else f"differ by {abs(c_np - c_nb):.1e}"
        print(f"{name}: numba speedup x{t_np / t_nb:.2f}, results {same}")


if __name__ == "__main__":
    main()
