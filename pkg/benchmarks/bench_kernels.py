"""Compare the numba kernels with the pure-numpy fallback.

Run: python3 benchmarks/bench_kernels.py [--repeats 3]

Each workload runs with both backends (switched in-process, the same way
NILSHAPE_NUMBA=0 does at import), and the outputs are checked for equality.
"""
import argparse
import time

import numpy as np

from nilshape import _kernels
from nilshape.balls import GeneratingSet, ball_sizes
from nilshape.dido import dido_dp
from nilshape.group import heisenberg
from nilshape.polygon import PolygonalNorm, l1_norm

HEXAGON = PolygonalNorm([(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)])


def workloads():
    h3 = GeneratingSet.standard(heisenberg(1))
    h5 = GeneratingSet.standard(heisenberg(2))
    return {
        "bfs H3 n<=60": lambda: ball_sizes(h3, 60).rows,
        "bfs H5 n<=14": lambda: ball_sizes(h5, 14).rows,
        "dido dp l1 steps=200": lambda: dido_dp(l1_norm(), steps=200).values,
        "dido dp hexagon steps=120": lambda: dido_dp(HEXAGON, steps=120).values,
    }


def timed(fn, repeats):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--repeats", type=int, default=3)
    args = p.parse_args()
    if _kernels.numba is None:
        raise SystemExit("numba is not installed; nothing to compare")

    print(f"{'workload':28s} {'numpy s':>9s} {'numba s':>9s} {'speedup':>8s}  equal")
    for name, fn in workloads().items():
        _kernels.USE_NUMBA = True
        fn()  # warm up the JIT cache
        t_nb, out_nb = timed(fn, args.repeats)
        _kernels.USE_NUMBA = False
        t_np, out_np = timed(fn, args.repeats)
        same = np.array_equal(np.asarray(out_nb), np.asarray(out_np))
        print(f"{name:28s} {t_np:9.3f} {t_nb:9.3f} {t_np / t_nb:7.1f}x  {same}")


if __name__ == "__main__":
    main()
