"""Compiled versus pure-numpy kernels on the chain integrator and the reversible CA.

    python3 benchmarks/bench_kernels.py [--sites 4000] [--steps 2000] [--repeat 5]

Both backends are imported directly so one process times both. Results are
also checked for bit-identity.
"""

from __future__ import annotations

import argparse
import importlib
import time

import numpy as np


def best_of(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_verlet(mod, n: int, steps: int, repeat: int):
    rng = np.random.default_rng(1)
    u0, v0 = rng.normal(size=n), rng.normal(size=n)
    dist = np.array([1, 2], dtype=np.int64)
    kappa = np.array([1.0, 0.5])
    out = {}

    def go():
        u, v = u0.copy(), v0.copy()
        mod.verlet_run(u, v, dist, kappa, 1.0, 0.02, steps)
        out["u"] = u

    return best_of(go, repeat), out["u"]


def bench_ca(mod, n: int, steps: int, repeat: int):
    rng = np.random.default_rng(2)
    c0 = rng.integers(0, 2, n).astype(np.uint8)
    p0 = rng.integers(0, 2, n).astype(np.uint8)
    table = np.array([0, 1, 1, 1, 1, 1, 1, 1], dtype=np.uint8)
    out = {}

    def go():
        c, p = c0.copy(), p0.copy()
        mod.ca_run(c, p, 1, table, steps)
        out["c"] = c

    return best_of(go, repeat), out["c"]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sites", type=int, default=4000)
    ap.add_argument("--steps", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    py = importlib.import_module("spacetimelab._pykernels")
    try:
        cy = importlib.import_module("spacetimelab._ckernels")
    except ImportError:
        print("compiled extension not built; only the numpy backend is available")
        cy = None

    print(f"{args.sites} sites, {args.steps} steps, best of {args.repeat}")
    print(f"{'kernel':<8}{'backend':<10}{'total s':>10}{'us/step':>10}{'speedup':>9}")
    for name, bench in (("verlet", bench_verlet), ("ca", bench_ca)):
        t_py, r_py = bench(py, args.sites, args.steps, args.repeat)
        print(f"{name:<8}{'numpy':<10}{t_py:>10.4f}{1e6 * t_py / args.steps:>10.2f}{1.0:>9.2f}")
        if cy is None:
            continue
        t_cy, r_cy = bench(cy, args.sites, args.steps, args.repeat)
        same = "identical" if np.array_equal(r_py, r_cy) else "DIFFERENT"
        print(f"{name:<8}{'cython':<10}{t_cy:>10.4f}{1e6 * t_cy / args.steps:>10.2f}{t_py / t_cy:>9.2f}  {same}")


if __name__ == "__main__":
    main()
