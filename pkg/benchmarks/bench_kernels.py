"""Benchmark the compiled kernel extension against the pure-NumPy fallback.

Usage: python benchmarks/bench_kernels.py [--repeats 5]

Times each kernel on a few representative shapes and prints the speedup of
the compiled backend. Results from the two backends are cross-checked
before timing so a fast-but-wrong kernel cannot slip through.
"""

import argparse
import time

import numpy as np

from antidote_clustering.kernels import _py

try:
    from antidote_clustering.kernels import _core
except ImportError:
    _core = None

SHAPES = [
    ("small", 200, 2, 4),
    ("medium", 2000, 10, 8),
    ("large", 5000, 20, 16),
]


def _time(fn, args, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    if _core is None:
        print("compiled extension not available; nothing to compare")
        return

    rng = np.random.default_rng(0)
    print(f"{'kernel':<22} {'shape':<8} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for name, n, d, k in SHAPES:
        X = rng.standard_normal((n, d))
        C = rng.standard_normal((k, d))
        labels = rng.integers(0, k, size=n)
        V = rng.standard_normal((n, d))
        cases = [
            ("pairwise_sq_dists", (X, C)),
            ("assign_nearest", (X, C)),
            ("min_sq_dists", (X, C)),
            ("update_centers", (X, labels, k)),
            ("block_soft_threshold", (V, 0.5)),
        ]
        for kernel, call_args in cases:
            ref = getattr(_py, kernel)(*call_args)
            got = getattr(_core, kernel)(*call_args)
            if isinstance(ref, tuple):
                for r, g in zip(ref, got):
                    np.testing.assert_allclose(r, g, atol=1e-10)
            else:
                np.testing.assert_allclose(ref, got, atol=1e-10)
            t_py = _time(getattr(_py, kernel), call_args, args.repeats)
            t_c = _time(getattr(_core, kernel), call_args, args.repeats)
            print(
                f"{kernel:<22} {name:<8} {t_py * 1e3:>8.2f}ms {t_c * 1e3:>8.2f}ms "
                f"{t_py / t_c:>7.1f}x"
            )


if __name__ == "__main__":
    main()
