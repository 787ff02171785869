"""Grid-fill benchmark: compiled numba kernel vs pure-numpy fallback.

Times the full voxel evaluation for one state at a given resolution and
checks that both backends agree bit for bit.  The numba path includes a
warm-up call so JIT compilation is not billed to the timing.

Usage: python benchmarks/bench_grid.py [--N 151] [--repeat 3]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from rscp import _accel
from rscp.density import GridSpec, build_grid
from rscp.states import PotentialParams, StateLabels


def _time_fill(labels, params, spec, repeat: int) -> tuple[float, np.ndarray]:
    best = float("inf")
    grid = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        grid = build_grid(labels, params, spec)
        best = min(best, time.perf_counter() - t0)
    return best, grid.values


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, default=151)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--n", type=int, default=6)
    ap.add_argument("--l", type=int, default=5)
    ap.add_argument("--m", type=int, default=0)
    ap.add_argument("--b", type=float, default=0.5)
    ap.add_argument("--c", type=float, default=0.5)
    args = ap.parse_args()

    labels = StateLabels(args.n, args.l, args.m)
    params = PotentialParams(1.0, args.b, args.c)
    spec = GridSpec(args.N, 60.0)
    voxels = args.N ** 3

    results = {}

    saved = _accel.PURE_NUMPY
    try:
        _accel.PURE_NUMPY = True
        t_numpy, v_numpy = _time_fill(labels, params, spec, args.repeat)
        results["numpy"] = (t_numpy, v_numpy)

        if _accel.HAS_NUMBA:
            _accel.PURE_NUMPY = False
            build_grid(labels, params, GridSpec(11, 60.0))  # JIT warm-up
            t_numba, v_numba = _time_fill(labels, params, spec, args.repeat)
            results["numba"] = (t_numba, v_numba)
    finally:
        _accel.PURE_NUMPY = saved

    print(f"state (n,l,m)=({args.n},{args.l},{args.m})"
          f" b={args.b} c={args.c}, grid {args.N}^3 = {voxels} voxels")
    for name, (t, _) in results.items():
        print(f"  {name:6s} {t * 1e3:10.1f} ms   {voxels / t / 1e6:8.2f} Mvox/s")
    if len(results) == 2:
        diff = np.max(np.abs(results["numba"][1] - results["numpy"][1]))
        speedup = results["numpy"][0] / results["numba"][0]
        print(f"  speedup numba/numpy: {speedup:.2f}x,"
              f" max |difference| = {diff:.3e}")
    else:
        print("  numba unavailable; numpy fallback only")


if __name__ == "__main__":
    main()
