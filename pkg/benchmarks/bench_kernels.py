"""Time the subset-DP kernels under both backends.

    python benchmarks/bench_kernels.py --sizes 12 14 16 18 --repeats 3

The numba column excludes JIT compilation (one warm-up call per kernel).  Every
pair of tables is compared before timing is reported.
"""

import argparse
import time

import numpy as np

from pwtd._accel import HAVE_NUMBA
from pwtd._kernels import subset_table
from pwtd.graph import generate

KINDS = ("treedepth", "vertex_separation", "path_ends")


def best_time(kind, masks, backend, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        subset_table(kind, masks, backend)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[12, 14, 16, 18])
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    if not HAVE_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")

    warm = generate("random_bounded_pw", {"n": 6, "a": 3, "p": 0.5}, 0)[0].neighbor_masks
    for kind in KINDS:
        subset_table(kind, warm, "numba")

    print(f"{'kernel':<18} {'n':>3} {'numba s':>10} {'numpy s':>10} {'speedup':>8}")
    for n in args.sizes:
        g, _ = generate("random_bounded_pw", {"n": n, "a": 4, "p": 0.6}, args.seed)
        for kind in KINDS:
            np.testing.assert_array_equal(
                subset_table(kind, g.neighbor_masks, "numba"), subset_table(kind, g.neighbor_masks, "numpy")
            )
            t_jit = best_time(kind, g.neighbor_masks, "numba", args.repeats)
            t_np = best_time(kind, g.neighbor_masks, "numpy", args.repeats)
            print(f"{kind:<18} {n:>3} {t_jit:>10.4f} {t_np:>10.4f} {t_np / t_jit:>7.1f}x")


if __name__ == "__main__":
    main()
