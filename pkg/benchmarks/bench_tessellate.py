#!/usr/bin/env python3
"""Benchmark the labeling kernels: JIT vs pure-numpy, brute vs tiled.

Run:  python3 benchmarks/bench_tessellate.py [--resolution 512] [--repeat 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from curvetile.analysis import random_segment_stroke, survey_window
from curvetile.sites import build_site_set
from curvetile.voronoi import RasterSpec
from curvetile.wallpaper import group_table
from curvetile import _kernels_numpy


def build_reference_scene():
    rng = np.random.default_rng(77)
    table = group_table("p6m", 1.0)
    stroke = random_segment_stroke(rng, table)
    window = survey_window(table, cells=2.0)
    s = build_site_set([stroke], "p6m", 1.0, window)
    return s, window


def time_kernel(fn, args, repeat: int) -> float:
    fn(*args)  # warm (JIT compile / cache touch)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--resolution", type=int, default=512)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    s, window = build_reference_scene()
    spec = RasterSpec.fit(window, args.resolution)
    segs, owner = s.segment_arrays()
    kernel_args = (
        spec.window.x0, spec.window.y0, spec.step, spec.width, spec.height, segs, owner,
    )
    print(
        f"scene: p6m, {len(s.instances)} instances, {segs.shape[0]} segments, "
        f"{spec.width}x{spec.height} pixels"
    )

    rows = []
    try:
        from curvetile import _kernels_numba

        rows.append(("numba  brute", time_kernel(_kernels_numba.label_brute, kernel_args, args.repeat)))
        rows.append(("numba  tiled", time_kernel(_kernels_numba.label_tiled, kernel_args, args.repeat)))
    except ImportError:
        print("numba not available; benchmarking the numpy backend only")
    rows.append(("numpy  brute", time_kernel(_kernels_numpy.label_brute, kernel_args, args.repeat)))
    rows.append(("numpy  tiled", time_kernel(_kernels_numpy.label_tiled, kernel_args, args.repeat)))

    base = rows[0][1]
    print(f"{'kernel':<14}{'best (ms)':>12}{'vs first':>10}")
    for name, t in rows:
        print(f"{name:<14}{1000 * t:>12.2f}{base / t:>9.2f}x")

    # sanity: all variants agree exactly
    ref_labels, ref_d2 = _kernels_numpy.label_brute(*kernel_args)
    try:
        from curvetile import _kernels_numba

        for fn in (_kernels_numba.label_brute, _kernels_numba.label_tiled):
            lab, d2 = fn(*kernel_args)
            assert np.array_equal(lab, ref_labels) and np.array_equal(d2, ref_d2)
    except ImportError:
        pass
    lab, d2 = _kernels_numpy.label_tiled(*kernel_args)
    assert np.array_equal(lab, ref_labels) and np.array_equal(d2, ref_d2)
    print("all kernels produce identical labels and distances")


if __name__ == "__main__":
    main()
