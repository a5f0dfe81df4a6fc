"""Discrete Voronoi tessellation over segment-site instances.

Labels are the exact per-pixel argmin of the distance functions (the lower
envelope evaluated at pixel centers), with ties broken toward the lowest
instance id.  Boundaries are traced along pixel-edge midpoints between
4-adjacent pixels of differing labels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .errors import ValidationError
from .sites import SiteSet
from .wallpaper import Rect


@dataclass(frozen=True)
class RasterSpec:
    """Pixel grid over a world-space window; row 0 is the bottom row."""

    window: Rect
    width: int
    height: int

    def __post_init__(self):
        if self.width < 8 or self.height < 8:
            raise ValidationError("raster must be at least 8x8 pixels")
        sx = self.window.width / self.width
        sy = self.window.height / self.height
        if abs(sx - sy) > 1e-9 * sx:
            raise ValidationError("window aspect does not match pixel grid")

    @property
    def step(self) -> float:
        return self.window.width / self.width

    @staticmethod
    def fit(window: Rect, width: int) -> "RasterSpec":
        """Raster of ``width`` columns; the window's top edge is nudged up
        to land exactly on a pixel row."""
        if window.width <= 0 or window.height <= 0:
            raise ValidationError("window is degenerate")
        step = window.width / width
        h = max(8, int(math.ceil(window.height / step - 1e-9)))
        win = Rect(window.x0, window.y0, window.x1, window.y0 + h * step)
        return RasterSpec(window=win, width=width, height=h)

    def pixel_centers_x(self) -> np.ndarray:
        return self.window.x0 + (np.arange(self.width, dtype=np.float64) + 0.5) * self.step

    def pixel_centers_y(self) -> np.ndarray:
        return self.window.y0 + (np.arange(self.height, dtype=np.float64) + 0.5) * self.step


@dataclass
class LabelMap:
    spec: RasterSpec
    labels: np.ndarray          # (H, W) instance ids
    orbit_labels: np.ndarray    # (H, W) stroke (congruence-class) ids
    distance: np.ndarray        # (H, W) distance to the winning instance
    site_set: SiteSet = field(repr=False)

    def keyed_labels(self) -> np.ndarray:
        """Labels rewritten as stable instance keys (orbit index + cell),
        for comparisons across runs with different instance id spaces."""
        keys = np.array(
            [inst.key() for inst in self.site_set.instances], dtype=np.int64
        )
        return keys[self.labels]


@dataclass
class BoundaryArc:
    """Polyline separating two instances' regions."""

    left_label: int
    right_label: int
    points: np.ndarray          # (K, 2) world coordinates
    straightness: float
    closed: bool
    n_cracks: int = 0           # pixel-edge crossings represented

    @property
    def length(self) -> float:
        d = np.diff(self.points, axis=0)
        return float(np.hypot(d[:, 0], d[:, 1]).sum())


def _run(s: SiteSet, spec: RasterSpec, kernel) -> LabelMap:
    if not s.instances:
        raise ValidationError("site set has no instances")
    segs, owner = s.segment_arrays()
    labels, d2 = kernel(
        spec.window.x0, spec.window.y0, spec.step, spec.width, spec.height, segs, owner
    )
    stroke_of = s.stroke_of_instance_array()
    return LabelMap(
        spec=spec,
        labels=labels,
        orbit_labels=stroke_of[labels],
        distance=np.sqrt(d2),
        site_set=s,
    )


def tessellate(s: SiteSet, spec: RasterSpec) -> LabelMap:
    """Reference path: scan every instance segment at every pixel."""
    return _run(s, spec, _backend.label_brute)


def tessellate_accelerated(s: SiteSet, spec: RasterSpec) -> LabelMap:
    """Pruned path; labels are bit-identical to ``tessellate``."""
    return _run(s, spec, _backend.label_tiled)


def straightness_of(points: np.ndarray) -> float:
    """Max deviation from the least-squares line over the arc length."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.shape[0] < 3:
        return 0.0
    d = np.diff(pts, axis=0)
    length = float(np.hypot(d[:, 0], d[:, 1]).sum())
    if length <= 0.0:
        return 0.0
    q = pts - pts.mean(axis=0)
    cov = q.T @ q
    _, evecs = np.linalg.eigh(cov)
    normal = evecs[:, 0]
    dev = float(np.abs(q @ normal).max())
    return dev / length


def extract_boundaries(m: LabelMap) -> list[BoundaryArc]:
    """Trace maximal label-pair boundaries through crack midpoints.

    Every differing 4-adjacent pixel pair contributes to exactly one arc.
    At checkerboard corners the four meeting cracks are paired west-north
    and east-south, a fixed deterministic choice.
    """
    lab = m.labels
    h, w = lab.shape
    x0, y0, step = m.spec.window.x0, m.spec.window.y0, m.spec.step

    rv, cv = np.nonzero(lab[:, 1:] != lab[:, :-1])
    rh, ch = np.nonzero(lab[1:, :] != lab[:-1, :])
    nv, nh = rv.size, rh.size
    n = nv + nh
    if n == 0:
        return []

    mx = np.empty(n)
    my = np.empty(n)
    mx[:nv] = x0 + (cv + 1.0) * step
    my[:nv] = y0 + (rv + 0.5) * step
    mx[nv:] = x0 + (ch + 0.5) * step
    my[nv:] = y0 + (rh + 1.0) * step

    la = np.empty(n, np.int64)
    lb = np.empty(n, np.int64)
    la[:nv] = lab[rv, cv]
    lb[:nv] = lab[rv, cv + 1]
    la[nv:] = lab[rh, ch]
    lb[nv:] = lab[rh + 1, ch]
    lo = np.minimum(la, lb)
    hi = np.maximum(la, lb)
    pair_code = lo * (lab.max() + 1) + hi
    pair_ids, pair_idx = np.unique(pair_code, return_inverse=True)
    n_pairs = pair_ids.size

    # Corner ids on the (W+1) x (H+1) lattice; two slots per crack.
    corner0 = np.empty(n, np.int64)
    corner1 = np.empty(n, np.int64)
    corner0[:nv] = rv * (w + 1) + (cv + 1)          # lower end of vertical crack
    corner1[:nv] = (rv + 1) * (w + 1) + (cv + 1)    # upper end
    corner0[nv:] = (rh + 1) * (w + 1) + ch          # left end of horizontal crack
    corner1[nv:] = (rh + 1) * (w + 1) + (ch + 1)    # right end

    # Side codes seen from the corner: W=0, E=1, S=2, N=3.
    side0 = np.empty(n, np.int8)
    side1 = np.empty(n, np.int8)
    side0[:nv] = 3
    side1[:nv] = 2
    side0[nv:] = 1
    side1[nv:] = 0

    slot_key = np.empty(2 * n, np.int64)
    slot_key[0::2] = corner0 * n_pairs + pair_idx
    slot_key[1::2] = corner1 * n_pairs + pair_idx
    slot_side = np.empty(2 * n, np.int8)
    slot_side[0::2] = side0
    slot_side[1::2] = side1

    order = np.argsort(slot_key, kind="stable")
    keys_sorted = slot_key[order]
    partner = np.full(2 * n, -1, dtype=np.int64)
    run_starts = np.flatnonzero(np.concatenate(([True], keys_sorted[1:] != keys_sorted[:-1])))
    run_lengths = np.diff(np.concatenate((run_starts, [keys_sorted.size])))

    pairs2 = run_starts[run_lengths == 2]
    a = order[pairs2]
    b = order[pairs2 + 1]
    partner[a] = b
    partner[b] = a
    for s in run_starts[run_lengths == 4]:
        slots = order[s : s + 4]
        slots = slots[np.argsort(slot_side[slots], kind="stable")]
        # sorted side codes are [W, E, S, N]: join W-N and E-S
        partner[slots[0]] = slots[3]
        partner[slots[3]] = slots[0]
        partner[slots[1]] = slots[2]
        partner[slots[2]] = slots[1]

    chain_order, offsets, closed = _backend.walk_chains(partner)

    arcs: list[BoundaryArc] = []
    for ci in range(len(closed)):
        idx = chain_order[offsets[ci] : offsets[ci + 1]]
        pts = np.stack([mx[idx], my[idx]], axis=1)
        is_closed = bool(closed[ci])
        if is_closed and pts.shape[0] >= 2:
            pts = np.vstack([pts, pts[:1]])
        if pts.shape[0] == 1:
            # Lone crack between two junctions: use its corner endpoints.
            k = idx[0]
            pts = np.array(
                [
                    [x0 + (corner0[k] % (w + 1)) * step, y0 + (corner0[k] // (w + 1)) * step],
                    [x0 + (corner1[k] % (w + 1)) * step, y0 + (corner1[k] // (w + 1)) * step],
                ]
            )
        arcs.append(
            BoundaryArc(
                left_label=int(lo[idx[0]]),
                right_label=int(hi[idx[0]]),
                points=pts,
                straightness=straightness_of(pts),
                closed=is_closed,
                n_cracks=int(idx.size),
            )
        )
    return arcs


def equidistance_check(m: LabelMap, arcs: list[BoundaryArc]) -> float:
    """Worst |d(point, left site) - d(point, right site)| over all arc
    points: the boundary localization error of the raster."""
    from .geometry import _point_segments_dist2

    worst = 0.0
    for arc in arcs:
        da = np.sqrt(
            _point_segments_dist2(
                arc.points, m.site_set.instances[arc.left_label].shape.as_array()
            ).min(axis=1)
        )
        db = np.sqrt(
            _point_segments_dist2(
                arc.points, m.site_set.instances[arc.right_label].shape.as_array()
            ).min(axis=1)
        )
        worst = max(worst, float(np.abs(da - db).max()))
    return worst
