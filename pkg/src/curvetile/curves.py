"""Cubic curve input forms and their flattening to segment polylines.

Strokes may be described as Hermite segments (positions plus tangents),
Catmull-Rom chains (positions only, tangents implied), or cubic Bezier
control points.  All are converted to Beziers and flattened by recursive
midpoint subdivision, which keeps every emitted vertex exactly on the
curve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import ValidationError
from .geometry import Point, Segment, SiteShape


@dataclass(frozen=True)
class CubicBezier:
    b0: Point
    b1: Point
    b2: Point
    b3: Point

    def control_array(self) -> np.ndarray:
        return np.array(
            [[p.x, p.y] for p in (self.b0, self.b1, self.b2, self.b3)],
            dtype=np.float64,
        )


@dataclass(frozen=True)
class HermiteSegment:
    """Endpoint positions with outgoing/incoming tangent vectors."""

    p0: Point
    p1: Point
    m0: tuple[float, float]
    m1: tuple[float, float]

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (*self.m0, *self.m1)):
            raise ValidationError("non-finite tangent")


@dataclass(frozen=True)
class CatmullRomChain:
    points: tuple[Point, ...]
    parameterization: Literal["uniform", "centripetal"] = "uniform"

    def __post_init__(self):
        if len(self.points) < 2:
            raise ValidationError("Catmull-Rom chain needs at least 2 points")
        for a, b in zip(self.points, self.points[1:]):
            if a.x == b.x and a.y == b.y:
                raise ValidationError("consecutive Catmull-Rom points must be distinct")
        if self.parameterization not in ("uniform", "centripetal"):
            raise ValidationError(f"unknown parameterization {self.parameterization!r}")


def hermite_to_bezier(h: HermiteSegment) -> CubicBezier:
    """Convert to Bezier form: inner control points sit a third of the
    tangent away from each endpoint."""
    return CubicBezier(
        h.p0,
        Point(h.p0.x + h.m0[0] / 3.0, h.p0.y + h.m0[1] / 3.0),
        Point(h.p1.x - h.m1[0] / 3.0, h.p1.y - h.m1[1] / 3.0),
        h.p1,
    )


def bezier_to_hermite(b: CubicBezier) -> HermiteSegment:
    return HermiteSegment(
        b.b0,
        b.b3,
        (3.0 * (b.b1.x - b.b0.x), 3.0 * (b.b1.y - b.b0.y)),
        (3.0 * (b.b3.x - b.b2.x), 3.0 * (b.b3.y - b.b2.y)),
    )


def evaluate(b: CubicBezier, t: float) -> Point:
    """De Casteljau evaluation at parameter ``t``."""
    pts = b.control_array()
    for _ in range(3):
        pts = (1.0 - t) * pts[:-1] + t * pts[1:]
    return Point(float(pts[0, 0]), float(pts[0, 1]))


def evaluate_derivative(b: CubicBezier, t: float) -> tuple[float, float]:
    pts = b.control_array()
    d = 3.0 * (pts[1:] - pts[:-1])
    for _ in range(2):
        d = (1.0 - t) * d[:-1] + t * d[1:]
    return float(d[0, 0]), float(d[0, 1])


def _knots(points: np.ndarray, parameterization: str) -> np.ndarray:
    n = points.shape[0]
    if parameterization == "uniform":
        return np.arange(n, dtype=np.float64)
    gaps = np.sqrt(np.linalg.norm(points[1:] - points[:-1], axis=1))
    return np.concatenate([[0.0], np.cumsum(gaps)])


def catmullrom_to_beziers(c: CatmullRomChain) -> list[CubicBezier]:
    """One Bezier per span; interior tangents from neighbor differences,
    endpoint tangents one-sided."""
    pts = np.array([[p.x, p.y] for p in c.points], dtype=np.float64)
    n = pts.shape[0]
    t = _knots(pts, c.parameterization)
    tangents = np.empty_like(pts)
    tangents[0] = (pts[1] - pts[0]) / (t[1] - t[0])
    tangents[-1] = (pts[-1] - pts[-2]) / (t[-1] - t[-2])
    for i in range(1, n - 1):
        d0 = t[i] - t[i - 1]
        d1 = t[i + 1] - t[i]
        tangents[i] = (d1 * (pts[i] - pts[i - 1]) / d0 + d0 * (pts[i + 1] - pts[i]) / d1) / (d0 + d1)
    out = []
    for i in range(n - 1):
        h = t[i + 1] - t[i]
        m0 = tangents[i] * h
        m1 = tangents[i + 1] * h
        out.append(
            hermite_to_bezier(
                HermiteSegment(
                    Point(*pts[i]), Point(*pts[i + 1]), (m0[0], m0[1]), (m1[0], m1[1])
                )
            )
        )
    return out


def split_half(b: CubicBezier) -> tuple[CubicBezier, CubicBezier]:
    """Midpoint de Casteljau split."""
    p = b.control_array()
    q = 0.5 * (p[:-1] + p[1:])
    r = 0.5 * (q[:-1] + q[1:])
    s = 0.5 * (r[:-1] + r[1:])
    left = CubicBezier(b.b0, Point(*q[0]), Point(*r[0]), Point(*s[0]))
    right = CubicBezier(Point(*s[0]), Point(*r[1]), Point(*q[2]), b.b3)
    return left, right


def flatten(b: CubicBezier, levels: int) -> list[Segment]:
    """Chord polyline after ``levels`` rounds of midpoint subdivision,
    giving ``2**levels`` segments with on-curve vertices."""
    if levels < 0:
        raise ValidationError("levels must be >= 0")
    quads = [b]
    for _ in range(levels):
        quads = [half for q in quads for half in split_half(q)]
    return [Segment(q.b0, q.b3) for q in quads]


def flatten_chain(beziers: list[CubicBezier], levels: int, source: str = "curve") -> SiteShape:
    """Flatten a Bezier chain into a single polyline shape."""
    segs = []
    for b in beziers:
        segs.extend(flatten(b, levels))
    return SiteShape(segs, source=source)


DEFAULT_FLATTEN_LEVELS = 4
