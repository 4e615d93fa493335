#!/usr/bin/env python3
"""Benchmark the compiled escape kernel against the pure-Python fallback.

Renders a boundary-rich strip (where most pixels burn the full iteration
budget) with both backends, asserts the outputs are bit-identical, and
reports the speedup.  Run from the repo root:

    python benchmarks/bench_escape.py [--size 384] [--max-iter 512] [--threads 4]
"""
import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

import numpy as np

from detlab.toyworlds._kernel import compiled_escape_many, python_escape_many
from detlab.toyworlds.mandelbrot import pixel_centers

REGION = (-0.80, -0.70, 0.05, 0.15)  # seahorse valley: boundary-dominated


def grid_points(size: int):
    xs, ys = pixel_centers(REGION, size, size)
    return np.tile(xs, size), np.repeat(ys, size)


def run(kernel, cr, ci, max_iter: int, repeats: int):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = kernel(cr, ci, max_iter, 4.0, False)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--size", type=int, default=384, help="grid edge in pixels")
    parser.add_argument("--max-iter", type=int, default=512)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    cr, ci = grid_points(args.size)
    n = cr.size
    print(f"escape-time kernel benchmark: {args.size}x{args.size} pixels "
          f"({n} points), max_iter={args.max_iter}, region={REGION}")

    t_py, out_py = run(python_escape_many, cr, ci, args.max_iter, args.repeats)
    mpts_py = n / t_py / 1e6
    print(f"  python fallback : {t_py:8.3f} s   ({mpts_py:6.2f} Mpixel/s)")

    if compiled_escape_many is None:
        print("  compiled kernel : not built (pip install -e . to build it)")
        return 0

    t_c, out_c = run(compiled_escape_many, cr, ci, args.max_iter, args.repeats)
    mpts_c = n / t_c / 1e6
    print(f"  compiled kernel : {t_c:8.3f} s   ({mpts_c:6.2f} Mpixel/s)")
    print(f"  speedup         : {t_py / t_c:8.1f}x")

    same = np.array_equal(out_py[0], out_c[0]) and np.array_equal(out_py[1], out_c[1])
    print(f"  bit-identical   : {same}")
    return 0 if same else 1


if __name__ == "__main__":
    raise SystemExit(main())
