"""Compiled versus numpy kernels.

    python benchmarks/bench_kernels.py [--repeat 5]

Times each kernel on synthetic inputs, then an end-to-end verification and
optimization with each backend (the backend is fixed at import, so those
runs go through a subprocess with HOMOCOVER_PURE_PYTHON set).
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from homocover import _kernels_py

try:
    from homocover import _kernels as _compiled
except ImportError:
    _compiled = None

END_TO_END = """
import time, numpy as np
from homocover.geometry import convex_hull
from homocover.covering import gamma_upper, verify_cover
from homocover.compose import compose_cover, simplex_segment_decomposition
from homocover.kernels import BACKEND
T = convex_hull(np.array([[1,1,1],[1,-1,-1],[-1,1,-1],[-1,-1,1.]]), 3)
C = convex_hull(np.array([[a,b,c] for a in (0,1) for b in (0,1) for c in (0,1)], float), 3)
t = time.perf_counter()
for _ in range(20):
    verify_cover(T, compose_cover(simplex_segment_decomposition(T)), eps=1e-3)
t1 = time.perf_counter() - t
t = time.perf_counter()
gamma_upper(C, 8, budget=64)
t2 = time.perf_counter() - t
print(BACKEND, t1, t2)
"""


def inputs(rng, k=3, facets=12, homothets=8, points=2000):
    N = rng.normal(size=(facets, k))
    N /= np.linalg.norm(N, axis=1)[:, None]
    b = rng.uniform(0.5, 1.5, size=facets)
    C = rng.normal(scale=0.3, size=(homothets, k))
    H = 0.6 * b + C @ N.T
    V = rng.normal(scale=0.2, size=(k + 1, k))
    P = rng.normal(scale=0.7, size=(points, k))
    return V, N, b, C, H, P


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    V, N, b, C, H, P = inputs(rng)
    cases = {
        "classify_cell": lambda m: m.classify_cell(V, N, H, 1e-9),
        "nearest_homothet": lambda m: m.nearest_homothet(P, N, b, C),
        "min_violation": lambda m: m.min_violation(P, N, H),
    }
    print(f"{'kernel':<18}{'numpy (us)':>12}{'compiled (us)':>15}{'speedup':>9}")
    for name, fn in cases.items():
        loops = 200 if name == "classify_cell" else 20
        py = min(timeit.repeat(lambda: fn(_kernels_py), number=loops, repeat=args.repeat)) / loops * 1e6
        if _compiled is None:
            print(f"{name:<18}{py:>12.1f}{'n/a':>15}")
            continue
        cc = min(timeit.repeat(lambda: fn(_compiled), number=loops, repeat=args.repeat)) / loops * 1e6
        print(f"{name:<18}{py:>12.1f}{cc:>15.1f}{py / cc:>8.1f}x")

    print()
    print(f"{'backend':<10}{'20 verifies (s)':>17}{'cube m=8 optimize (s)':>24}")
    for flag in ("1", "0"):
        env = dict(os.environ, HOMOCOVER_PURE_PYTHON=flag)
        out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True, check=True)
        backend, t1, t2 = out.stdout.split()
        print(f"{backend:<10}{float(t1):>17.3f}{float(t2):>24.3f}")


if __name__ == "__main__":
    main()
