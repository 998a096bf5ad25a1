#!/usr/bin/env python3
"""Compare the numba batch kernels against the pure-numpy trial loop.

Both backends run the identical seeded trial streams, so the reports agree
branch for branch; only the throughput differs.  The numba path is warmed up
before timing so compilation is excluded.

Usage:
    python3 benchmarks/bench_backends.py --trials 10000 --seed 7
"""

import argparse
import time

from edgeteleport._backend import NUMBA_AVAILABLE
from edgeteleport.protocol import run_trials, warm_up


def time_run(variant: str, backend: str, trials: int, seed: int):
    t0 = time.perf_counter()
    report = run_trials(None, variant, trials, seed=seed, backend=backend)
    return time.perf_counter() - t0, report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=10000)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    backends = ["numpy"]
    if NUMBA_AVAILABLE:
        warm_up("electronic")
        warm_up("coldatom")
        backends.insert(0, "numba")
    else:
        print("numba not importable; timing the numpy path only")

    print(f"{args.trials} trials per cell, seed {args.seed}")
    print(f"{'variant':<12} {'backend':<8} {'seconds':>9} {'trials/s':>10}   check")
    for variant in ("electronic", "coldatom"):
        rows = {}
        for backend in backends:
            dt, report = time_run(variant, backend, args.trials, args.seed)
            rows[backend] = (dt, report)
            rate = args.trials / dt
            print(f"{variant:<12} {backend:<8} {dt:9.3f} {rate:10.0f}   "
                  f"min_fid={report.min_fidelity:.3e} mean_rounds={report.mean_rounds:.4g}")
        if len(rows) == 2:
            agree = (rows["numba"][1].branch_counts == rows["numpy"][1].branch_counts
                     and rows["numba"][1].rounds_histogram == rows["numpy"][1].rounds_histogram)
            speedup = rows["numpy"][0] / rows["numba"][0]
            print(f"{'':<12} backends agree on all outcomes: {agree}; speedup x{speedup:.1f}")


if __name__ == "__main__":
    main()
