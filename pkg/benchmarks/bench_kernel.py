"""Compare the numba and numpy backends of the contour-quadrature contraction.

Run: python3 benchmarks/bench_kernel.py [--sizes 256 1024 4096] [--repeat 5]

Also times a full kernel matrix on an Aztec diamond through each backend,
toggling the module flag directly so both run in one process.
"""

import argparse
import time

import numpy as np

from railyard import _accel
from railyard.aztec import aztec_spec
from railyard.graph import Vertex, window_rows
from railyard.kernel import KernelContext, kernel_matrix


def best_of(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def bench_contract(M, nb, repeat, rng):
    z = np.exp(2j * np.pi * rng.random(M)) * 2.0
    w = np.exp(2j * np.pi * rng.random(M))
    B = rng.standard_normal((M, nb)) + 1j * rng.standard_normal((M, nb))
    _accel.cauchy_contract_numba(z[:4], w[:4], B[:4])  # compile outside the timing
    a = _accel.cauchy_contract_numba(z, w, B)
    b = _accel.cauchy_contract_numpy(z, w, B)
    diff = float(np.max(np.abs(a - b)) / np.max(np.abs(b)))
    t_nb = best_of(lambda: _accel.cauchy_contract_numba(z, w, B), repeat)
    t_np = best_of(lambda: _accel.cauchy_contract_numpy(z, w, B), repeat)
    return t_nb, t_np, diff


def bench_kernel(n, repeat):
    spec = aztec_spec(n)
    rows = window_rows(3)
    evens = [Vertex(2 * i, y) for i in spec.columns for y in rows]
    odds = [Vertex(2 * i - 1, y) for i in spec.columns for y in rows]
    out = {}
    for flag in (True, False):
        _accel.USE_NUMBA = flag
        ctx = KernelContext(spec)
        kernel_matrix(ctx, evens[:2], odds[:2], "numeric")
        out[flag] = best_of(lambda: kernel_matrix(KernelContext(spec), evens, odds, "numeric"), repeat)
    return out[True], out[False]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[256, 1024, 4096])
    ap.add_argument("--columns", type=int, default=8)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--aztec", type=int, default=4)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    if _accel.cauchy_contract_numba is None:
        raise SystemExit("numba is not importable; nothing to compare")
    print(f"{'M':>6} {'numba s':>10} {'numpy s':>10} {'speedup':>8} {'rel diff':>9}")
    for M in args.sizes:
        t_nb, t_np, diff = bench_contract(M, args.columns, args.repeat, rng)
        print(f"{M:>6} {t_nb:10.4f} {t_np:10.4f} {t_np / t_nb:8.2f} {diff:9.1e}")
    saved = _accel.USE_NUMBA
    try:
        t_nb, t_np = bench_kernel(args.aztec, max(1, args.repeat // 2))
    finally:
        _accel.USE_NUMBA = saved
    print(f"kernel matrix, Aztec n={args.aztec}: numba {t_nb:.3f} s, numpy {t_np:.3f} s")


if __name__ == "__main__":
    main()
