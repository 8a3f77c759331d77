"""Timing comparison of the lattice-enumeration kernel backends.

Runs the same random pure-integer models through the numba-compiled kernel
and the pure-numpy fallback and prints per-model and aggregate timings. The
fallback is also what LPAGENT_NO_NUMBA=1 selects at import time; here both
paths are exercised in one process via the force_numpy switch.

Usage: python3 benchmarks/bench_oracle.py [--models N] [--seed S]
"""

from __future__ import annotations

import argparse
import random
import time

import numpy as np

from lpagent.amdl._kernels import USE_NUMBA, enumerate_lattice


def random_case(rng: random.Random, n_vars: int, n_rows: int, ub: int):
    lo = np.zeros(n_vars, dtype=np.int64)
    sizes = np.full(n_vars, ub + 1, dtype=np.int64)
    A = np.array([[rng.randint(-3, 4) for _ in range(n_vars)]
                  for _ in range(n_rows)], dtype=float)
    senses = np.array([rng.choice([-1, 1]) for _ in range(n_rows)], dtype=np.int8)
    b = np.array([float(rng.randint(0, 3 * ub)) for _ in range(n_rows)])
    empty = np.zeros(0, dtype=np.int64)
    c = np.array([float(rng.randint(-5, 5)) for _ in range(n_vars)])
    return (lo, sizes, A, senses, b,
            empty, np.zeros(0), np.zeros((0, n_vars)),
            np.zeros(0, dtype=np.int8), np.zeros(0), c, True, 1e-9)


def run(args, force_numpy: bool) -> float:
    start = time.perf_counter()
    enumerate_lattice(*args, force_numpy=force_numpy)
    return time.perf_counter() - start


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--models", type=int, default=8)
    parser.add_argument("--seed", type=int, default=7)
    opts = parser.parse_args()

    if not USE_NUMBA:
        print("warning: LPAGENT_NO_NUMBA is set; both columns use the numpy path")

    rng = random.Random(opts.seed)
    cases = []
    for _ in range(opts.models):
        n_vars = rng.randint(3, 5)
        ub = rng.randint(8, 14)
        cases.append(random_case(rng, n_vars, rng.randint(2, 6), ub))

    # warm up the JIT so compile time is not billed to the first model
    run(cases[0], force_numpy=False)

    print(f"{'model':>5} {'points':>10} {'numba (ms)':>12} {'numpy (ms)':>12} {'speedup':>8}")
    totals = [0.0, 0.0]
    for i, case in enumerate(cases):
        points = int(np.prod(case[1]))
        t_numba = run(case, force_numpy=False)
        t_numpy = run(case, force_numpy=True)
        totals[0] += t_numba
        totals[1] += t_numpy
        ratio = t_numpy / t_numba if t_numba > 0 else float("inf")
        print(f"{i:>5} {points:>10} {t_numba * 1e3:>12.3f} {t_numpy * 1e3:>12.3f} {ratio:>7.1f}x")
    ratio = totals[1] / totals[0] if totals[0] > 0 else float("inf")
    print(f"total {' ':>10} {totals[0] * 1e3:>12.3f} {totals[1] * 1e3:>12.3f} {ratio:>7.1f}x")


if __name__ == "__main__":
    main()
