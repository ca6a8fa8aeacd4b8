"""Side-by-side timing of the numba and numpy step kernels.

    python -m affinity_ca.bench [--size 100] [--steps 2000]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from . import _accel, kernels
from .engine import Stepper
from .initcfg import random_density
from .rng import RngStream
from .rules import RuleParams


def steps_per_second(kernel, size: int, steps: int, seed: int = 0) -> float:
    grid = random_density(size, size, 0.5, seed)
    src = np.array(grid.cells)
    dst = np.empty_like(src)
    with Stepper(RuleParams(), RngStream(seed), kernel=kernel) as stepper:
        stepper.advance(src, dst, 0)  # warm-up / JIT
        start = time.perf_counter()
        for t in range(steps):
            stepper.advance(src, dst, t)
        elapsed = time.perf_counter() - start
    return steps / elapsed


def main(size: int = 100, steps: int = 2000) -> dict[str, float]:
    results = {}
    candidates = [("numpy", kernels.step_band_numpy)]
    if _accel.HAVE_NUMBA:
        candidates.insert(0, ("numba", kernels.step_band_numba))
    for name, kernel in candidates:
        rate = steps_per_second(kernel, size, steps)
        results[name] = rate
        print(f"{name:6s} {size}x{size}: {rate:10.1f} steps/s  "
              f"({rate * size * size / 1e6:.1f} Mcell/s)")
    if len(results) == 2:
        print(f"speed-up numba/numpy: {results['numba'] / results['numpy']:.1f}x")
    print(f"active backend: {_accel.BACKEND}")
    return results


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--size", type=int, default=100)
    ap.add_argument("--steps", type=int, default=2000)
    a = ap.parse_args()
    main(a.size, a.steps)
