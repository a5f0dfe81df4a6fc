"""Planar primitives: points, rigid motions, segments, and distance kernels.

Everything here is an immutable value in double precision.  Site shapes are
stored as flat ``(n, 4)`` arrays of segment endpoints so the rasterization
kernels can consume them without conversion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import ValidationError

ORTHO_TOL = 1e-12


def _require_finite(values, what: str) -> None:
    arr = np.asarray(values, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"non-finite coordinate in {what}")


@dataclass(frozen=True)
class Point:
    """A location in world units."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValidationError("point coordinates must be finite")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=np.float64)


@dataclass(frozen=True)
class Segment:
    """A line segment; ``p0 == p1`` degenerates to a point site."""

    p0: Point
    p1: Point

    def as_array(self) -> np.ndarray:
        return np.array([self.p0.x, self.p0.y, self.p1.x, self.p1.y], dtype=np.float64)

    @property
    def length(self) -> float:
        return math.hypot(self.p1.x - self.p0.x, self.p1.y - self.p0.y)


class Isometry2:
    """Rigid motion of the plane, optionally orientation-reversing.

    ``linear`` must be orthogonal; ``det(linear)`` is +1 for rotations and
    -1 for reflections and glides.
    """

    __slots__ = ("linear", "translation")

    def __init__(self, linear, translation):
        lin = np.array(linear, dtype=np.float64).reshape(2, 2)
        tr = np.array(translation, dtype=np.float64).reshape(2)
        _require_finite(lin, "isometry linear part")
        _require_finite(tr, "isometry translation")
        if not np.allclose(lin.T @ lin, np.eye(2), atol=ORTHO_TOL, rtol=0.0):
            raise ValidationError("isometry linear part is not orthogonal")
        lin.setflags(write=False)
        tr.setflags(write=False)
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "translation", tr)

    def __setattr__(self, name, value):  # immutable
        raise AttributeError("Isometry2 is immutable")

    def __repr__(self):
        return f"Isometry2(linear={self.linear.tolist()}, translation={self.translation.tolist()})"

    @property
    def det(self) -> float:
        lin = self.linear
        return float(lin[0, 0] * lin[1, 1] - lin[0, 1] * lin[1, 0])

    @property
    def is_reflective(self) -> bool:
        return self.det < 0.0

    @staticmethod
    def identity() -> "Isometry2":
        return Isometry2(np.eye(2), np.zeros(2))

    @staticmethod
    def rotation(angle: float, center=(0.0, 0.0)) -> "Isometry2":
        c, s = math.cos(angle), math.sin(angle)
        lin = np.array([[c, -s], [s, c]])
        ctr = np.asarray(center, dtype=np.float64)
        return Isometry2(lin, ctr - lin @ ctr)

    @staticmethod
    def reflection(axis_angle: float, through=(0.0, 0.0)) -> "Isometry2":
        """Reflection across the line at ``axis_angle`` through a point."""
        c, s = math.cos(2.0 * axis_angle), math.sin(2.0 * axis_angle)
        lin = np.array([[c, s], [s, -c]])
        pt = np.asarray(through, dtype=np.float64)
        return Isometry2(lin, pt - lin @ pt)

    @staticmethod
    def translation_of(v) -> "Isometry2":
        return Isometry2(np.eye(2), v)

    def apply(self, points: np.ndarray) -> np.ndarray:
        """Map an ``(..., 2)`` array of points."""
        pts = np.asarray(points, dtype=np.float64)
        return pts @ self.linear.T + self.translation

    def apply_point(self, p: Point) -> Point:
        out = self.apply(p.as_array())
        return Point(float(out[0]), float(out[1]))

    def inverse(self) -> "Isometry2":
        lin_inv = self.linear.T
        return Isometry2(lin_inv, -(lin_inv @ self.translation))


def compose(g1: Isometry2, g2: Isometry2) -> Isometry2:
    """The motion applying ``g2`` first, then ``g1``."""
    return Isometry2(g1.linear @ g2.linear, g1.linear @ g2.translation + g1.translation)


class SiteShape:
    """A simple 1-manifold with boundary, flattened to segments.

    ``source`` records where the segments came from ("polyline" for raw
    strokes, "curve" for flattened cubic chains, "point" for degenerate
    single-point sites).
    """

    __slots__ = ("_arr", "source")

    def __init__(self, segments, source: str = "polyline"):
        if isinstance(segments, np.ndarray):
            arr = np.array(segments, dtype=np.float64).reshape(-1, 4)
        else:
            rows = []
            for seg in segments:
                if isinstance(seg, Segment):
                    rows.append(seg.as_array())
                else:
                    rows.append(np.asarray(seg, dtype=np.float64).reshape(4))
            arr = np.array(rows, dtype=np.float64).reshape(-1, 4)
        if arr.shape[0] == 0:
            raise ValidationError("empty site shape")
        _require_finite(arr, "site shape")
        arr.setflags(write=False)
        self._arr = arr
        self.source = source

    @staticmethod
    def from_points(points: Iterable, source: str = "polyline") -> "SiteShape":
        """Polyline through ``points``; a single point yields a point site."""
        pts = np.asarray([(p.x, p.y) if isinstance(p, Point) else tuple(p) for p in points], dtype=np.float64)
        if pts.shape[0] == 0:
            raise ValidationError("empty site shape")
        if pts.shape[0] == 1:
            seg = np.hstack([pts, pts])
            return SiteShape(seg, source="point")
        segs = np.hstack([pts[:-1], pts[1:]])
        return SiteShape(segs, source=source)

    def as_array(self) -> np.ndarray:
        return self._arr

    @property
    def segments(self) -> tuple[Segment, ...]:
        return tuple(
            Segment(Point(r[0], r[1]), Point(r[2], r[3])) for r in self._arr
        )

    def __len__(self) -> int:
        return self._arr.shape[0]

    def bounds(self) -> tuple[float, float, float, float]:
        a = self._arr
        xs = np.concatenate([a[:, 0], a[:, 2]])
        ys = np.concatenate([a[:, 1], a[:, 3]])
        return float(xs.min()), float(ys.min()), float(xs.max()), float(ys.max())

    def __repr__(self):
        return f"SiteShape({len(self)} segments, source={self.source!r})"


def distance_point_segment(p: Point, s: Segment) -> float:
    """Distance from ``p`` to the closest point of ``s``.

    The segment is the convex combination ``p0*(1-t) + p1*t`` for t in [0,1];
    a degenerate segment reduces to point distance.
    """
    return float(
        _point_segments_dist2(
            np.array([[p.x, p.y]]), np.array([s.as_array()])
        )[0, 0]
        ** 0.5
    )


def distance_point_shape(p: Point, c: SiteShape) -> float:
    """Distance from ``p`` to the nearest segment of the shape."""
    d2 = _point_segments_dist2(np.array([[p.x, p.y]]), c.as_array())
    return float(np.sqrt(d2.min()))


def _point_segments_dist2(points: np.ndarray, segs: np.ndarray) -> np.ndarray:
    """Squared distances, shape ``(n_points, n_segments)``."""
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    sg = np.asarray(segs, dtype=np.float64).reshape(-1, 4)
    dx = sg[:, 2] - sg[:, 0]
    dy = sg[:, 3] - sg[:, 1]
    ell2 = dx * dx + dy * dy
    wx = pts[:, 0:1] - sg[None, :, 0]
    wy = pts[:, 1:2] - sg[None, :, 1]
    num = wx * dx + wy * dy
    t = np.zeros_like(num)
    np.divide(num, ell2, out=t, where=ell2 > 0.0)
    np.clip(t, 0.0, 1.0, out=t)
    ex = wx - t * dx
    ey = wy - t * dy
    return ex * ex + ey * ey


def apply_isometry(g: Isometry2, c: SiteShape) -> SiteShape:
    """Transform every segment endpoint of the shape by ``g``."""
    arr = c.as_array()
    p0 = g.apply(arr[:, 0:2])
    p1 = g.apply(arr[:, 2:4])
    return SiteShape(np.hstack([p0, p1]), source=c.source)


def _orient(ax, ay, bx, by, cx, cy):
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def _on_segment(ax, ay, bx, by, px, py):
    """Collinear point-in-box test."""
    return min(ax, bx) <= px <= max(ax, bx) and min(ay, by) <= py <= max(ay, by)


def segments_intersect(s1, s2) -> bool:
    """Whether two segments share any point (touching counts)."""
    ax, ay, bx, by = (float(v) for v in np.asarray(s1, dtype=np.float64).reshape(4))
    cx, cy, dx, dy = (float(v) for v in np.asarray(s2, dtype=np.float64).reshape(4))
    d1 = _orient(cx, cy, dx, dy, ax, ay)
    d2 = _orient(cx, cy, dx, dy, bx, by)
    d3 = _orient(ax, ay, bx, by, cx, cy)
    d4 = _orient(ax, ay, bx, by, dx, dy)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and d1 != d2 and d3 != d4:
        return True
    if d1 == 0 and _on_segment(cx, cy, dx, dy, ax, ay):
        return True
    if d2 == 0 and _on_segment(cx, cy, dx, dy, bx, by):
        return True
    if d3 == 0 and _on_segment(ax, ay, bx, by, cx, cy):
        return True
    if d4 == 0 and _on_segment(ax, ay, bx, by, dx, dy):
        return True
    return False


def segment_intersection_point(s1, s2):
    """Some common point of two touching segments, or None."""
    a = np.asarray(s1, dtype=np.float64).reshape(4)
    b = np.asarray(s2, dtype=np.float64).reshape(4)
    for px, py in ((a[0], a[1]), (a[2], a[3])):
        if _orient(b[0], b[1], b[2], b[3], px, py) == 0 and _on_segment(b[0], b[1], b[2], b[3], px, py):
            return Point(float(px), float(py))
    for px, py in ((b[0], b[1]), (b[2], b[3])):
        if _orient(a[0], a[1], a[2], a[3], px, py) == 0 and _on_segment(a[0], a[1], a[2], a[3], px, py):
            return Point(float(px), float(py))
    r = (a[2] - a[0], a[3] - a[1])
    s = (b[2] - b[0], b[3] - b[1])
    denom = r[0] * s[1] - r[1] * s[0]
    if denom == 0.0:
        return None
    t = ((b[0] - a[0]) * s[1] - (b[1] - a[1]) * s[0]) / denom
    return Point(float(a[0] + t * r[0]), float(a[1] + t * r[1]))


def segment_segment_distance(s1, s2) -> float:
    """Minimum distance between two segments (0 when they intersect)."""
    if segments_intersect(s1, s2):
        return 0.0
    a = np.asarray(s1, dtype=np.float64).reshape(4)
    b = np.asarray(s2, dtype=np.float64).reshape(4)
    d2 = min(
        _point_segments_dist2(a[0:2].reshape(1, 2), b.reshape(1, 4))[0, 0],
        _point_segments_dist2(a[2:4].reshape(1, 2), b.reshape(1, 4))[0, 0],
        _point_segments_dist2(b[0:2].reshape(1, 2), a.reshape(1, 4))[0, 0],
        _point_segments_dist2(b[2:4].reshape(1, 2), a.reshape(1, 4))[0, 0],
    )
    return float(math.sqrt(d2))


def _any_pair_intersects(a: np.ndarray, b: np.ndarray) -> bool:
    """Vectorized: does any segment of ``a`` touch any segment of ``b``?

    Same predicate as :func:`segments_intersect`, broadcast over all pairs.
    """
    ax, ay, bx, by = (a[:, k, None] for k in range(4))
    cx, cy, dx, dy = (b[None, :, k] for k in range(4))

    def orient(px, py, qx, qy, rx, ry):
        return (qx - px) * (ry - py) - (qy - py) * (rx - px)

    d1 = orient(cx, cy, dx, dy, ax, ay)
    d2 = orient(cx, cy, dx, dy, bx, by)
    d3 = orient(ax, ay, bx, by, cx, cy)
    d4 = orient(ax, ay, bx, by, dx, dy)
    proper = ((d1 > 0) != (d2 > 0)) & ((d3 > 0) != (d4 > 0)) & (d1 != d2) & (d3 != d4)
    if np.any(proper):
        return True

    def on_seg(px, py, qx, qy, rx, ry):
        return (
            (np.minimum(px, qx) <= rx)
            & (rx <= np.maximum(px, qx))
            & (np.minimum(py, qy) <= ry)
            & (ry <= np.maximum(py, qy))
        )

    touch = (
        ((d1 == 0) & on_seg(cx, cy, dx, dy, ax, ay))
        | ((d2 == 0) & on_seg(cx, cy, dx, dy, bx, by))
        | ((d3 == 0) & on_seg(ax, ay, bx, by, cx, cy))
        | ((d4 == 0) & on_seg(ax, ay, bx, by, dx, dy))
    )
    return bool(np.any(touch))


def shape_shape_distance(a: SiteShape, b: SiteShape) -> float:
    """Minimum distance between two shapes' segment sets."""
    arr_a = a.as_array()
    arr_b = b.as_array()
    if _any_pair_intersects(arr_a, arr_b):
        return 0.0
    pa = np.vstack([arr_a[:, :2], arr_a[:, 2:]])
    pb = np.vstack([arr_b[:, :2], arr_b[:, 2:]])
    d2 = min(
        _point_segments_dist2(pa, arr_b).min(),
        _point_segments_dist2(pb, arr_a).min(),
    )
    return float(math.sqrt(d2))


def _endpoints_shared(a, b, tol=0.0):
    """Count endpoint coincidences between two segment rows."""
    pts_a = [(a[0], a[1]), (a[2], a[3])]
    pts_b = [(b[0], b[1]), (b[2], b[3])]
    shared = 0
    for pa in pts_a:
        for pb in pts_b:
            if abs(pa[0] - pb[0]) <= tol and abs(pa[1] - pb[1]) <= tol:
                shared += 1
    return shared


def validate_simple(c: SiteShape) -> bool:
    """True iff no two non-adjacent segments touch and adjacent ones meet
    only at their one shared endpoint."""
    arr = c.as_array()
    n = arr.shape[0]
    if n == 0:
        raise ValidationError("empty site shape")
    for i in range(n):
        for j in range(i + 1, n):
            a, b = arr[i], arr[j]
            shared = _endpoints_shared(a, b)
            if shared == 0:
                if segments_intersect(a, b):
                    return False
            elif shared == 1:
                # Adjacent: the only permitted contact is the shared endpoint.
                if _segments_overlap_beyond_joint(a, b):
                    return False
            else:
                # Same segment twice, or a 2-point loop.
                return False
    return True


def _segments_overlap_beyond_joint(a, b) -> bool:
    """For segments sharing one endpoint: do they touch anywhere else?

    Two distinct straight segments can share more than their joint only by
    being collinear with positive overlap along the same direction.
    """
    pts_a = [(a[0], a[1]), (a[2], a[3])]
    pts_b = [(b[0], b[1]), (b[2], b[3])]
    joint = None
    for pa in pts_a:
        for pb in pts_b:
            if pa == pb:
                joint = pa
    free_a = pts_a[0] if pts_a[1] == joint else pts_a[1]
    free_b = pts_b[0] if pts_b[1] == joint else pts_b[1]
    va = (free_a[0] - joint[0], free_a[1] - joint[1])
    vb = (free_b[0] - joint[0], free_b[1] - joint[1])
    cross = va[0] * vb[1] - va[1] * vb[0]
    dot = va[0] * vb[0] + va[1] * vb[1]
    return cross == 0.0 and dot > 0.0
