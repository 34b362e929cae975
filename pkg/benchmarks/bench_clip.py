"""Benchmark the compiled segment-clipping kernel against the pure-Python one.

Usage: python3 benchmarks/bench_clip.py [--segments N] [--mesh M] [--repeat R]
"""

import argparse
import time

import numpy as np

from shapecurrents import _clip_py
from shapecurrents.kernels import BACKEND, clip_grid_segments


def make_segments(n: int, mesh: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    theta = 2.0 * np.pi * np.arange(n + 1) / n
    r = 0.35 + 0.1 * np.sin(5 * theta)
    pts = 0.5 * mesh * (1.0 + np.column_stack([r * np.cos(theta),
                                               r * np.sin(theta)]))
    pts += 0.01 * rng.standard_normal(pts.shape)
    return np.stack([pts[:-1], pts[1:]], axis=1)


def bench(fn, P, mesh, repeat):
    fn(P, mesh)  # warm up
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(P, mesh)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--segments", type=int, default=20000)
    ap.add_argument("--mesh", type=int, default=80)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    P = make_segments(args.segments, args.mesh)
    t_pure = bench(_clip_py.clip_grid_segments, P, args.mesh, args.repeat)
    print(f"pure python : {t_pure * 1e3:9.2f} ms")
    if BACKEND == "compiled":
        t_fast = bench(clip_grid_segments, P, args.mesh, args.repeat)
        print(f"compiled    : {t_fast * 1e3:9.2f} ms")
        print(f"speedup     : {t_pure / t_fast:9.1f}x")
    else:
        print("compiled backend unavailable; only the pure kernel was timed")


if __name__ == "__main__":
    main()
