"""Compare the compiled Jacobi kernels with the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N] [--suite]

Prints per-call times for the spectral kernels at several dimensions and,
with --suite, the wall time of a reduced axiom suite under each backend.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from qtexture import _pykernels
from qtexture.states import make_rng, random_mixed

try:
    from qtexture import _kernels
except ImportError:
    _kernels = None

DIMS = (2, 3, 4, 6, 8, 12, 16)
SUITE_SNIPPET = (
    "import time; from qtexture import harness, kernels; t=time.perf_counter(); "
    "harness.run_axiom_suite(harness.SuiteConfig(samples_per_dim=60)); "
    "print(kernels.BACKEND, time.perf_counter()-t)"
)


def per_call_us(fn, arg, repeat):
    n = max(1, repeat)
    best = min(timeit.repeat(lambda: fn(arg), number=n, repeat=5))
    return 1e6 * best / n


def kernel_table(repeat):
    rng = make_rng(0)
    print(f"{'d':>3} {'kernel':<12} {'cython us':>10} {'numpy us':>10} {'speedup':>8}")
    for d in DIMS:
        rho = np.ascontiguousarray(random_mixed(d, d, rng).data)
        for name in ("eigh", "f1_spectrum"):
            py = per_call_us(getattr(_pykernels, name), rho, repeat)
            if _kernels is None:
                print(f"{d:>3} {name:<12} {'-':>10} {py:>10.1f} {'-':>8}")
                continue
            cy = per_call_us(getattr(_kernels, name), rho, repeat)
            print(f"{d:>3} {name:<12} {cy:>10.1f} {py:>10.1f} {py / cy:>7.2f}x")


def suite_timing():
    for flag in ("", "1"):
        env = dict(os.environ)
        env.pop("QTEXTURE_PURE_PYTHON", None)
        if flag:
            env["QTEXTURE_PURE_PYTHON"] = flag
        out = subprocess.run([sys.executable, "-c", SUITE_SNIPPET], env=env, capture_output=True, text=True,
                             check=True)
        backend, secs = out.stdout.split()
        print(f"axiom suite (60 samples/dim, d=2..6) with {backend:<6} backend: {float(secs):.2f} s")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=2000, help="calls per timing sample")
    ap.add_argument("--suite", action="store_true", help="also time a reduced axiom suite per backend")
    args = ap.parse_args()
    if _kernels is None:
        print("compiled extension not available; showing numpy timings only")
    kernel_table(args.repeat)
    if args.suite:
        suite_timing()


if __name__ == "__main__":
    main()
