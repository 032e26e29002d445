"""Time the scanning kernels on every importable backend.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import math
import timeit

import numpy as np

from recurlab import kernels


def cases():
    rng = np.random.default_rng(0)
    golden = (math.sqrt(5) - 1) / 2
    ang = np.array([golden, math.sqrt(2) % 1, math.pi % 1])
    T = np.diag(np.exp(2j * np.pi * rng.uniform(size=16)))
    T[1:, :-1] += 0.01 * np.eye(15)
    x = rng.normal(size=16) + 0j
    coeffs = (0.5, 0.5, -0.5, 1.5)
    target = np.zeros(129, dtype=complex)
    target[1] = 1
    w = (np.arange(129) + 1.0) ** -0.25
    grid = (np.linspace(0, 1, 17)[:, None] * np.exp(2j * np.pi * np.arange(128) / 128)).ravel()
    poly = np.array([0, 1, 0.5, 0.25], dtype=complex)
    return {
        "diag_power_scan (3 angles, n<=1e6)": lambda k: k.diag_power_scan(np.zeros(3), ang, 0.0, 10 ** 6, True),
        "orbit_residuals (16x16, n<=2e4)": lambda k: k.orbit_residuals(T, x, np.ones(16), 20000),
        "lft_iterate_distances (N=128, n<=2e3)": lambda k: k.lft_iterate_distances(coeffs, target, w, 2000),
        "orbit_sup_residuals (2176 pts, n<=500)": lambda k: k.orbit_sup_residuals(coeffs, poly, grid, 500),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = kernels.available_backends()
    print(f"active backend: {kernels.BACKEND}; available: {', '.join(backends)}")
    header = f"{'kernel':42s}" + "".join(f"{name:>12s}" for name in backends)
    if "cython" in backends:
        header += f"{'speedup':>10s}"
    print(header)
    for label, fn in cases().items():
        times = {}
        for name, mod in backends.items():
            times[name] = min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat))
        line = f"{label:42s}" + "".join(f"{times[n]:11.4f}s" for n in backends)
        if "cython" in times:
            line += f"{times['python'] / times['cython']:9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
