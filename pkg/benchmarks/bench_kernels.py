"""Timing comparison of the compiled and pure-numpy kernel backends.

Runs each per-sample kernel on representative capture sizes and prints
a table of per-call times and the speedup of the compiled path. Invoke
with python3; no arguments are required.

    python3 benchmarks/bench_kernels.py [--repeat 20] [--samples 262144]
"""

import argparse
import time

import numpy as np

from fdsic import _kernels_numpy

try:
    from fdsic import _kernels_numba

    _kernels_numba._warmup()
except ImportError:
    _kernels_numba = None


def _timeit(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=20)
    parser.add_argument("--samples", type=int, default=262144)
    args = parser.parse_args()

    rng = np.random.default_rng(7)
    n = args.samples
    x = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) * 0.05
    h = (rng.standard_normal(8) + 1j * rng.standard_normal(8)) * 0.1

    cases = (
        ("pa_cubic", "pa_cubic", (x, 10.0, -3.2)),
        ("rx_poly", "rx_poly", (x, 3.16, 0.4, -1.7)),
        ("quantize_midrise", "quantize_midrise", (x, 2.0**-10)),
        ("convolve_trunc", "convolve_trunc", (x, h)),
        ("lagged_matrix", "lagged_matrix", (x, 8)),
    )

    print(f"samples per call: {n}, best of {args.repeat} runs")
    header = f"{'kernel':<18} {'numpy [ms]':>11} {'numba [ms]':>11} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for label, name, call_args in cases:
        t_np = _timeit(getattr(_kernels_numpy, name), call_args, args.repeat)
        if _kernels_numba is None:
            print(f"{label:<18} {t_np * 1e3:>11.3f} {'n/a':>11} {'n/a':>8}")
            continue
        t_nb = _timeit(getattr(_kernels_numba, name), call_args, args.repeat)
        print(
            f"{label:<18} {t_np * 1e3:>11.3f} {t_nb * 1e3:>11.3f}"
            f" {t_np / t_nb:>7.2f}x"
        )


if __name__ == "__main__":
    main()
