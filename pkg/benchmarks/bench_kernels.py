"""Benchmark the jitted kernels against the pure-numpy fallback.

Run:

    python3 benchmarks/bench_kernels.py

Force the numpy path everywhere (e.g. to reproduce a no-numba install):

    HARDYLOC_NO_NUMBA=1 python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from hardyloc import _kernels


def best_of(fn, *args, repeats=5):
    fn(*args)  # warmup (includes jit compilation on the numba path)
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def row(name, jitted, fallback):
    speedup = fallback / jitted if jitted > 0 else float("inf")
    print(f"{name:<28} {jitted * 1e3:>10.3f} ms {fallback * 1e3:>12.3f} ms {speedup:>8.1f}x")


def main():
    print(f"numba path enabled: {_kernels.USE_NUMBA}")
    print(f"{'kernel':<28} {'selected':>13} {'numpy':>15} {'speedup':>8}")

    rng = np.random.default_rng(0)
    f1 = rng.standard_normal(257)
    k1 = rng.standard_normal(257)
    row(
        "direct_convolve_1d N=257",
        best_of(_kernels.direct_convolve_1d, f1, k1, 0.0625),
        best_of(_kernels.direct_convolve_1d_np, f1, k1, 0.0625),
    )

    f2 = rng.standard_normal((65, 65))
    k2 = rng.standard_normal((65, 65))
    row(
        "direct_convolve_2d N=65",
        best_of(_kernels.direct_convolve_2d, f2, k2, 0.125),
        best_of(_kernels.direct_convolve_2d_np, f2, k2, 0.125),
    )

    a = rng.standard_normal(200_000)
    for w in (16, 1024):
        row(
            f"sliding_window_max w={w}",
            best_of(_kernels.sliding_window_max, a, w),
            best_of(_kernels.sliding_window_max_np, a, w),
        )

    # correctness cross-check while we are here
    np.testing.assert_allclose(
        _kernels.direct_convolve_1d(f1, k1, 0.0625),
        _kernels.direct_convolve_1d_np(f1, k1, 0.0625),
        rtol=1e-12,
    )
    np.testing.assert_array_equal(
        _kernels.sliding_window_max(a, 64), _kernels.sliding_window_max_np(a, 64)
    )
    print("paths agree on spot checks")


if __name__ == "__main__":
    main()
