"""Structural checks on tessellations: cell congruence, boundary
straightness, mirror-axis degeneracy, and the per-group survey."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import _backend
from .errors import CurvetileError, ValidationError
from .geometry import Isometry2, Point, SiteShape, validate_simple
from .sites import SiteSet, build_site_set
from .voronoi import BoundaryArc, LabelMap, RasterSpec, extract_boundaries, tessellate_accelerated
from .wallpaper import (
    AxisLine,
    GroupTable,
    Rect,
    clear_anchor,
    group_table,
    mirror_axes,
)

EPS_STRAIGHT = 0.01
MIN_ARC_PIXELS = 4
QUANTIZATION_FLOOR_PIXELS = 0.75


@dataclass
class CellOutline:
    """Closed pixel-accurate outline of one interior Voronoi cell."""

    instance_id: int
    orbit_id: int               # congruence class = stroke index
    polygon: np.ndarray         # (K, 2), implicitly closed
    placement: Isometry2        # stroke frame -> this instance's frame
    pixel_count: int

    def area(self) -> float:
        x, y = self.polygon[:, 0], self.polygon[:, 1]
        return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))

    def centroid(self) -> np.ndarray:
        return self.polygon.mean(axis=0)


@dataclass
class CongruenceReport:
    tolerance: float
    per_orbit: dict[int, dict] = field(default_factory=dict)

    @property
    def max_hausdorff(self) -> float:
        vals = [v["max_hausdorff"] for v in self.per_orbit.values() if not v.get("skipped")]
        return max(vals) if vals else 0.0

    @property
    def passed(self) -> bool:
        return all(
            v.get("skipped") or v["max_hausdorff"] <= self.tolerance
            for v in self.per_orbit.values()
        )

    def as_dict(self) -> dict:
        return {
            "tolerance": self.tolerance,
            "pass": self.passed,
            "max_hausdorff": self.max_hausdorff,
            "per_orbit": {str(k): v for k, v in sorted(self.per_orbit.items())},
        }


@dataclass
class StraightnessReport:
    values: list[float]
    straight_count: int
    curved_count: int
    all_straight: bool
    any_curved: bool
    straight_length_fraction: float

    def as_dict(self) -> dict:
        return {
            "arcs": len(self.values),
            "straight": self.straight_count,
            "curved": self.curved_count,
            "all_straight": self.all_straight,
            "any_curved": self.any_curved,
            "straight_length_fraction": self.straight_length_fraction,
        }


def _closed_segments(polygon: np.ndarray) -> np.ndarray:
    nxt = np.roll(polygon, -1, axis=0)
    return np.hstack([polygon, nxt])


def hausdorff_polygons(a: np.ndarray, b: np.ndarray) -> float:
    """Symmetric Hausdorff distance between two closed polylines."""
    segs_a = _closed_segments(a)
    segs_b = _closed_segments(b)
    a = np.ascontiguousarray(a)
    b = np.ascontiguousarray(b)
    return max(
        _backend.directed_max_min_dist(a, segs_b),
        _backend.directed_max_min_dist(b, segs_a),
    )


def _trace_region(mask: np.ndarray, x0: float, y0: float, step: float) -> list[np.ndarray]:
    """Closed crack-midpoint loops around a binary region."""
    h, w = mask.shape
    m8 = mask.astype(np.int8)
    rv, cv = np.nonzero(m8[:, 1:] != m8[:, :-1])
    rh, ch = np.nonzero(m8[1:, :] != m8[:-1, :])
    nv = rv.size
    n = nv + rh.size
    if n == 0:
        return []
    mx = np.empty(n)
    my = np.empty(n)
    mx[:nv] = x0 + (cv + 1.0) * step
    my[:nv] = y0 + (rv + 0.5) * step
    mx[nv:] = x0 + (ch + 0.5) * step
    my[nv:] = y0 + (rh + 1.0) * step
    corner0 = np.empty(n, np.int64)
    corner1 = np.empty(n, np.int64)
    corner0[:nv] = rv * (w + 1) + (cv + 1)
    corner1[:nv] = (rv + 1) * (w + 1) + (cv + 1)
    corner0[nv:] = (rh + 1) * (w + 1) + ch
    corner1[nv:] = (rh + 1) * (w + 1) + (ch + 1)
    side0 = np.empty(n, np.int8)
    side1 = np.empty(n, np.int8)
    side0[:nv] = 3
    side1[:nv] = 2
    side0[nv:] = 1
    side1[nv:] = 0

    slot_key = np.empty(2 * n, np.int64)
    slot_key[0::2] = corner0
    slot_key[1::2] = corner1
    slot_side = np.empty(2 * n, np.int8)
    slot_side[0::2] = side0
    slot_side[1::2] = side1
    order = np.argsort(slot_key, kind="stable")
    keys_sorted = slot_key[order]
    partner = np.full(2 * n, -1, dtype=np.int64)
    run_starts = np.flatnonzero(np.concatenate(([True], keys_sorted[1:] != keys_sorted[:-1])))
    run_lengths = np.diff(np.concatenate((run_starts, [keys_sorted.size])))
    two = run_starts[run_lengths == 2]
    a = order[two]
    b = order[two + 1]
    partner[a] = b
    partner[b] = a
    for s in run_starts[run_lengths == 4]:
        slots = order[s : s + 4]
        slots = slots[np.argsort(slot_side[slots], kind="stable")]
        partner[slots[0]] = slots[3]
        partner[slots[3]] = slots[0]
        partner[slots[1]] = slots[2]
        partner[slots[2]] = slots[1]
    chain_order, offsets, closed = _backend.walk_chains(partner)
    loops = []
    for ci in range(len(closed)):
        idx = chain_order[offsets[ci] : offsets[ci + 1]]
        if idx.size >= 3 and closed[ci]:
            loops.append(np.stack([mx[idx], my[idx]], axis=1))
    return loops


def extract_cells(m: LabelMap, arcs: Optional[Sequence[BoundaryArc]] = None) -> list[CellOutline]:
    """Outlines of every cell whose pixels stay clear of the window edge.

    ``arcs`` is accepted for interface symmetry; outlines are traced from
    the label grid directly, which yields the same crack midpoints the
    arcs are made of.
    """
    lab = m.labels
    h, w = lab.shape
    border = np.unique(
        np.concatenate([lab[0, :], lab[-1, :], lab[:, 0], lab[:, -1]])
    )
    border_set = set(int(v) for v in border)
    x0, y0, step = m.spec.window.x0, m.spec.window.y0, m.spec.step
    out = []
    for inst_id in np.unique(lab):
        iid = int(inst_id)
        if iid in border_set:
            continue
        mask = lab == inst_id
        loops = _trace_region(mask, x0, y0, step)
        if not loops:
            continue
        # Outer boundary is the longest loop; holes are other cells' business.
        loops.sort(key=lambda p: -p.shape[0])
        poly = loops[0]
        out.append(
            CellOutline(
                instance_id=iid,
                orbit_id=m.site_set.stroke_index(iid),
                polygon=poly,
                placement=m.site_set.placement(iid),
                pixel_count=int(mask.sum()),
            )
        )
    return out


def congruence_check(
    cells: Sequence[CellOutline], table: GroupTable, tol: float
) -> CongruenceReport:
    """Map every cell back through its placement and compare to the
    orbit's reference cell by symmetric Hausdorff distance."""
    report = CongruenceReport(tolerance=tol)
    by_orbit: dict[int, list[CellOutline]] = {}
    for c in cells:
        by_orbit.setdefault(c.orbit_id, []).append(c)
    for orbit_id, group in sorted(by_orbit.items()):
        group.sort(key=lambda c: c.instance_id)
        if len(group) < 2:
            report.per_orbit[orbit_id] = {
                "skipped": True,
                "note": "single interior cell",
                "n_cells": len(group),
            }
            continue
        canon = [c.placement.inverse().apply(c.polygon) for c in group]
        ref = canon[0]
        worst = 0.0
        for other in canon[1:]:
            worst = max(worst, hausdorff_polygons(ref, other))
        report.per_orbit[orbit_id] = {
            "skipped": False,
            "n_cells": len(group),
            "max_hausdorff": worst,
        }
    return report


def straightness_check(
    arcs: Sequence[BoundaryArc],
    eps_straight: float = EPS_STRAIGHT,
    min_length: float = 0.0,
    deviation_floor: float = 0.0,
) -> StraightnessReport:
    """Classify arcs as straight or curved by relative deviation from
    their least-squares line; arcs shorter than ``min_length`` are
    excluded from classification.

    ``deviation_floor`` (world units) absorbs raster quantization: a
    straight boundary at 30 or 45 degrees to the grid keeps an absolute
    staircase deviation near half a pixel no matter how short the arc is,
    so deviations under the floor never count as curvature.  Pass about
    0.75 pixel.
    """
    values = []
    straight_len = 0.0
    total_len = 0.0
    straight = curved = 0
    for arc in arcs:
        length = arc.length
        if length < min_length:
            continue
        values.append(arc.straightness)
        total_len += length
        if arc.straightness * length <= max(eps_straight * length, deviation_floor):
            straight += 1
            straight_len += length
        else:
            curved += 1
    return StraightnessReport(
        values=values,
        straight_count=straight,
        curved_count=curved,
        all_straight=curved == 0 and straight > 0,
        any_curved=curved > 0,
        straight_length_fraction=(straight_len / total_len) if total_len > 0 else 0.0,
    )


def point_line_distance(points: np.ndarray, axis: AxisLine) -> np.ndarray:
    nx, ny = -axis.direction[1], axis.direction[0]
    return np.abs((points[:, 0] - axis.point[0]) * nx + (points[:, 1] - axis.point[1]) * ny)


def arcs_on_mirror_axes(
    arcs: Sequence[BoundaryArc], table: GroupTable, window: Rect, tol: float
) -> list[tuple[BoundaryArc, AxisLine]]:
    """Arcs that lie entirely within ``tol`` of some mirror axis."""
    axes = mirror_axes(table, window)
    hits = []
    for arc in arcs:
        for axis in axes:
            if point_line_distance(arc.points, axis).max() <= tol:
                hits.append((arc, axis))
                break
    return hits


_ANCHOR_CACHE: dict[tuple[str, float], tuple[Point, float]] = {}


def safe_anchor(table: GroupTable) -> tuple[Point, float]:
    key = (table.name, table.lattice.scale)
    if key not in _ANCHOR_CACHE:
        _ANCHOR_CACHE[key] = clear_anchor(table)
    return _ANCHOR_CACHE[key]


def random_segment_stroke(rng: np.random.Generator, table: GroupTable) -> SiteShape:
    """A generic segment inside the group's widest clear disk, guaranteed
    not to collide with its own orbit.

    Generic means: long enough to act as a line site at raster scale, and
    at least 10 degrees off every lattice translation direction (a segment
    parallel to a translation makes that neighbor bisector exactly
    straight, hiding the curvature the experiment looks for).
    """
    anchor, clearance = safe_anchor(table)
    radius = 0.4 * clearance
    basis = table.lattice.basis()
    lattice_dirs = [
        math.atan2(basis[1, 0], basis[0, 0]),
        math.atan2(basis[1, 1], basis[0, 1]),
    ]
    for _ in range(256):
        pts = anchor.as_array() + _disk(rng, radius, 2)
        d = pts[1] - pts[0]
        if np.linalg.norm(d) < 0.55 * radius:
            continue
        ang = math.atan2(d[1], d[0])
        off = min(
            abs((ang - a + math.pi / 2) % math.pi - math.pi / 2) for a in lattice_dirs
        )
        if off < math.radians(10.0):
            continue
        return SiteShape.from_points(pts)
    raise CurvetileError("could not sample a stroke")


def random_polyline_stroke(
    rng: np.random.Generator, table: GroupTable, n_points: int = 3
) -> SiteShape:
    anchor, clearance = safe_anchor(table)
    radius = 0.4 * clearance
    for _ in range(64):
        pts = anchor.as_array() + _disk(rng, radius, n_points)
        if min(np.linalg.norm(np.diff(pts, axis=0), axis=1)) < 0.2 * radius:
            continue
        shape = SiteShape.from_points(pts)
        if validate_simple(shape):
            return shape
    raise CurvetileError("could not sample a stroke")


def _disk(rng: np.random.Generator, radius: float, n: int) -> np.ndarray:
    ang = rng.uniform(0.0, 2.0 * math.pi, n)
    rad = radius * np.sqrt(rng.uniform(0.05, 1.0, n))
    return np.stack([rad * np.cos(ang), rad * np.sin(ang)], axis=1)


def survey_window(table: GroupTable, cells: float = 2.0, offset: float = -0.23) -> Rect:
    """A window covering ``cells`` x ``cells`` lattice cells, shifted so
    typical cell boundaries stay off the window edge."""
    basis = table.lattice.basis()
    corners = np.array(
        [[0.0, 0.0], [cells, 0.0], [0.0, cells], [cells, cells]]
    ) @ basis.T
    shift = offset * table.lattice.scale
    return Rect(
        float(corners[:, 0].min() + shift),
        float(corners[:, 1].min() + shift),
        float(corners[:, 0].max() + shift),
        float(corners[:, 1].max() + shift),
    )


def run_scene(
    stroke_or_strokes,
    group: str,
    scale: float = 1.0,
    resolution: int = 512,
    cells: float = 2.0,
) -> tuple[SiteSet, LabelMap, list[BoundaryArc]]:
    """Convenience wrapper: build, tessellate (accelerated), trace."""
    table = group_table(group, scale)
    window = survey_window(table, cells=cells)
    strokes = stroke_or_strokes if isinstance(stroke_or_strokes, (list, tuple)) else [stroke_or_strokes]
    s = build_site_set(strokes, group, scale, window)
    spec = RasterSpec.fit(window, resolution)
    m = tessellate_accelerated(s, spec)
    return s, m, extract_boundaries(m)


FIXED_POLYGON_GROUPS = ("p4m", "pmm", "p3m1", "p6m")


def group_survey(
    stroke_sampler: Callable[[np.random.Generator, GroupTable], SiteShape],
    groups: Sequence[str],
    trials: int,
    resolution: int = 512,
    seed: int = 0,
    scale: float = 1.0,
) -> dict:
    """Random-stroke experiment per group.

    Records the fraction of trials producing at least one curved arc, the
    length fraction of straight boundary, and (for the fixed-polygon
    groups) whether interior cells coincide across trials.
    """
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    from .wallpaper import GROUP_NAMES

    results: dict[str, dict] = {}
    for g in groups:
        rng = np.random.default_rng([seed, GROUP_NAMES.index(g)])
        table = group_table(g, scale)
        curved_trials = 0
        straight_fracs = []
        trial_cells: list[list[CellOutline]] = []
        for _ in range(trials):
            stroke = stroke_sampler(rng, table)
            s, m, arcs = run_scene(stroke, g, scale, resolution)
            rep = straightness_check(
                arcs,
                min_length=MIN_ARC_PIXELS * m.spec.step,
                deviation_floor=QUANTIZATION_FLOOR_PIXELS * m.spec.step,
            )
            if rep.any_curved:
                curved_trials += 1
            straight_fracs.append(rep.straight_length_fraction)
            if g in FIXED_POLYGON_GROUPS:
                trial_cells.append(extract_cells(m))
        entry = {
            "trials": trials,
            "curved_fraction": curved_trials / trials,
            "straight_length_fraction": float(np.mean(straight_fracs)),
        }
        if g in FIXED_POLYGON_GROUPS:
            tol = 2.0 * survey_window(table).width / resolution
            entry["fixed_cell_max_mismatch"] = cell_set_mismatch(trial_cells, tol)
            entry["fixed_cells_consistent"] = entry["fixed_cell_max_mismatch"] <= tol
        results[g] = entry
    return results


def cell_set_mismatch(trial_cells: list[list[CellOutline]], tol: float) -> float:
    """Worst Hausdorff distance from any cell in any trial to its best
    match in trial 0 (and back), over cells present in all trials."""
    if len(trial_cells) < 2:
        return 0.0
    ref = trial_cells[0]
    worst = 0.0
    for cells in trial_cells[1:]:
        for src, dst in ((cells, ref), (ref, cells)):
            if not dst:
                return math.inf
            centroids = np.array([d.centroid() for d in dst])
            for c in src:
                # Cells coincide across trials, so the centroid-nearest
                # candidate is the match; Hausdorff then measures drift.
                k = int(np.argmin(np.linalg.norm(centroids - c.centroid(), axis=1)))
                worst = max(worst, hausdorff_polygons(c.polygon, dst[k].polygon))
    return worst
