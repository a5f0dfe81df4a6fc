"""Shared oracles and scene builders.

The oracles here are deliberately independent of the library's fast
paths: distances come from dense parameter sampling, labels from literal
per-pixel loops over `distance_point_shape`.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from curvetile.geometry import Point, SiteShape, distance_point_shape
from curvetile.sites import SiteSet, build_site_set
from curvetile.voronoi import RasterSpec
from curvetile.wallpaper import Rect


def sampled_distance(p: Point, shape: SiteShape) -> float:
    """Two-stage dense sampling along each segment.

    The squared distance is quadratic in the segment parameter, so the
    coarse-grid minimum brackets the true one; refining inside one grid
    step pins it to ~1e-7 world units.
    """
    best = math.inf
    px = np.array([p.x, p.y])
    for seg in shape.as_array():
        a, b = seg[:2], seg[2:]
        n = 10001
        t = np.linspace(0.0, 1.0, n)
        pts = a[None, :] * (1 - t[:, None]) + b[None, :] * t[:, None]
        d = np.hypot(pts[:, 0] - px[0], pts[:, 1] - px[1])
        k = int(np.argmin(d))
        t = np.linspace(t[max(0, k - 1)], t[min(n - 1, k + 1)], 2001)
        pts = a[None, :] * (1 - t[:, None]) + b[None, :] * t[:, None]
        d = np.hypot(pts[:, 0] - px[0], pts[:, 1] - px[1])
        best = min(best, float(d.min()))
    return best


def brute_labels(site_set: SiteSet, spec: RasterSpec):
    """Literal per-pixel scan with tie-break to the lowest instance id."""
    labels = np.empty((spec.height, spec.width), np.int32)
    dist = np.empty((spec.height, spec.width), np.float64)
    xs = spec.pixel_centers_x()
    ys = spec.pixel_centers_y()
    for r in range(spec.height):
        for c in range(spec.width):
            p = Point(float(xs[c]), float(ys[r]))
            best = math.inf
            bid = -1
            for idx, inst in enumerate(site_set.instances):
                d = distance_point_shape(p, inst.shape)
                if d < best:
                    best = d
                    bid = idx
            labels[r, c] = bid
            dist[r, c] = best
    return labels, dist


def point_stroke(x: float, y: float) -> SiteShape:
    return SiteShape.from_points([Point(x, y)])


def segment_stroke(x0, y0, x1, y1) -> SiteShape:
    return SiteShape.from_points([Point(x0, y0), Point(x1, y1)])


@pytest.fixture(scope="session")
def parabola_scene():
    """Point focus above a long horizontal segment: boundary y = x^2/4."""
    s = build_site_set(
        [point_stroke(0.0, 1.0), segment_stroke(-4.0, -1.0, 4.0, -1.0)],
        "p1",
        100.0,
        Rect(-2.0, -2.0, 2.0, 2.0),
    )
    return s


def parabola_polyline(n: int = 4001, half_span: float = 3.0) -> np.ndarray:
    t = np.linspace(-half_span, half_span, n)
    return np.stack([t, t * t / 4.0], axis=1)


def random_scene(rng: np.random.Generator, group: str, resolution: int = 128):
    """A small random scene for equivalence sweeps."""
    from curvetile.analysis import random_segment_stroke, survey_window
    from curvetile.wallpaper import group_table

    table = group_table(group, 1.0)
    stroke = random_segment_stroke(rng, table)
    window = survey_window(table, cells=2.0)
    s = build_site_set([stroke], group, 1.0, window)
    spec = RasterSpec.fit(window, resolution)
    return s, spec
