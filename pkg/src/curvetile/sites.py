"""Symmetric site sets: stroke orbits replicated over the lattice, plus
validation of the well-spacing conditions (uniform discreteness and
relative density) that make the Voronoi cells behave.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import _backend
from .errors import NotSimpleError, OrbitOverlapError, ValidationError
from .geometry import (
    Isometry2,
    Point,
    SiteShape,
    _any_pair_intersects,
    shape_shape_distance,
    validate_simple,
)
from .wallpaper import GroupTable, Lattice, Rect, SiteInstance, group_table, orbit, replicate


@dataclass(frozen=True)
class DeloneReport:
    uniformly_discrete: bool
    relatively_dense: bool
    r0_estimate: float
    r1_estimate: float
    witness: Optional[Point] = None

    def as_dict(self) -> dict:
        return {
            "uniformly_discrete": self.uniformly_discrete,
            "relatively_dense": self.relatively_dense,
            "r0_estimate": self.r0_estimate,
            "r1_estimate": self.r1_estimate,
            "witness": None if self.witness is None else [self.witness.x, self.witness.y],
        }


class SiteSet:
    """Strokes, their group orbits, and the replicated instances covering a
    window plus a safety margin."""

    def __init__(
        self,
        strokes: Sequence[SiteShape],
        table: GroupTable,
        window: Rect,
        margin: float,
        instances: list[SiteInstance],
        r1_bootstrap: float,
    ):
        self.strokes = tuple(strokes)
        self.table = table
        self.window = window
        self.margin = margin
        self.instances = instances
        self.r1_bootstrap = r1_bootstrap
        self._seg_cache: tuple[np.ndarray, np.ndarray] | None = None

    @property
    def group(self) -> str:
        return self.table.name

    @property
    def lattice(self) -> Lattice:
        return self.table.lattice

    def stroke_index(self, instance_idx: int) -> int:
        return self.instances[instance_idx].orbit_index // len(self.table.ops)

    def op_index(self, instance_idx: int) -> int:
        return self.instances[instance_idx].orbit_index % len(self.table.ops)

    def instance_key(self, instance_idx: int) -> tuple[int, int, int]:
        return self.instances[instance_idx].key()

    def placement(self, instance_idx: int) -> Isometry2:
        """The isometry that carried the original stroke to this instance."""
        inst = self.instances[instance_idx]
        op = self.table.ops[inst.orbit_index % len(self.table.ops)]
        shift = self.lattice.to_world(inst.cell)
        return Isometry2(op.linear, op.translation + shift)

    def segment_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """All instance segments as ``(M, 4)`` plus owning instance ids,
        ordered by ascending instance id."""
        if self._seg_cache is None:
            rows = []
            owners = []
            for idx, inst in enumerate(self.instances):
                arr = inst.shape.as_array()
                rows.append(arr)
                owners.append(np.full(arr.shape[0], idx, dtype=np.int32))
            segs = np.ascontiguousarray(np.vstack(rows))
            owner = np.concatenate(owners)
            self._seg_cache = (segs, owner)
        return self._seg_cache

    def stroke_of_instance_array(self) -> np.ndarray:
        n_ops = len(self.table.ops)
        return np.array(
            [inst.orbit_index // n_ops for inst in self.instances], dtype=np.int32
        )

    def __repr__(self):
        return (
            f"SiteSet(group={self.group}, strokes={len(self.strokes)}, "
            f"instances={len(self.instances)}, margin={self.margin:.3g})"
        )


def _check_orbit_overlap(instances: list[SiteInstance], n_ops: int) -> None:
    """Reject any stroke that touches one of its own symmetry images."""
    n = len(instances)
    if n < 2:
        return
    bounds = np.array([inst.shape.bounds() for inst in instances])
    stroke = np.array([inst.orbit_index // n_ops for inst in instances])
    # Vectorized bbox prefilter; exact segment tests only on candidates.
    sep = (
        (bounds[:, None, 2] < bounds[None, :, 0])
        | (bounds[None, :, 2] < bounds[:, None, 0])
        | (bounds[:, None, 3] < bounds[None, :, 1])
        | (bounds[None, :, 3] < bounds[:, None, 1])
    )
    same_stroke = stroke[:, None] == stroke[None, :]
    cand = ~sep & same_stroke & (np.arange(n)[:, None] < np.arange(n)[None, :])
    for a, b in zip(*np.nonzero(cand)):
        if _any_pair_intersects(
            instances[a].shape.as_array(), instances[b].shape.as_array()
        ):
            sa = int(stroke[a])
            raise OrbitOverlapError(
                f"orbit self-overlap: stroke {sa} op {instances[a].orbit_index % n_ops} "
                f"touches op {instances[b].orbit_index % n_ops}",
                op_a=instances[a].orbit_index % n_ops,
                op_b=instances[b].orbit_index % n_ops,
            )


def _max_min_distance(
    instances: list[SiteInstance], window: Rect, resolution: int
) -> float:
    """Covering radius over a probe grid of pixel centers in the window."""
    segs = np.vstack([inst.shape.as_array() for inst in instances])
    owner = np.zeros(segs.shape[0], dtype=np.int32)
    dx = window.width / resolution
    h = max(8, int(math.ceil(window.height / dx - 1e-9)))
    _, d2 = _backend.label_tiled(window.x0, window.y0, dx, resolution, h, segs, owner)
    return float(np.sqrt(d2.max()))


def build_site_set(
    strokes: Sequence[SiteShape],
    group: str,
    scale: float,
    window: Rect,
    margin: Optional[float] = None,
    bootstrap_resolution: int = 128,
) -> SiteSet:
    """Close the strokes under the group, replicate over the window, and
    size the replication margin from a bootstrap covering-radius pass."""
    if not strokes:
        raise ValidationError("no strokes given", field="strokes")
    for i, s in enumerate(strokes):
        if not validate_simple(s):
            raise NotSimpleError(f"stroke {i} is not simple (self-intersects)")
    table = group_table(group, scale)
    orbit_shapes: list[SiteShape] = []
    for s in strokes:
        orbit_shapes.extend(orbit(s, table))

    lattice = table.lattice
    margin0 = 2.0 * lattice.cell_diameter
    boot = replicate(orbit_shapes, lattice, window, margin0)
    _check_orbit_overlap(boot, len(table.ops))
    r1 = _max_min_distance(boot, window, bootstrap_resolution)

    eff_margin = max(2.0 * r1, margin if margin is not None else 0.0)
    instances = replicate(orbit_shapes, lattice, window, eff_margin)
    return SiteSet(
        strokes=strokes,
        table=table,
        window=window,
        margin=eff_margin,
        instances=instances,
        r1_bootstrap=r1,
    )


def replace_instance(s: SiteSet, idx: int, shape: SiteShape) -> SiteSet:
    """Copy of the site set with one instance's shape swapped out.

    Breaks the symmetry guarantee on purpose; used as a negative control
    in congruence experiments.
    """
    old = s.instances[idx]
    instances = list(s.instances)
    instances[idx] = SiteInstance(shape=shape, orbit_index=old.orbit_index, cell=old.cell)
    return SiteSet(
        strokes=s.strokes,
        table=s.table,
        window=s.window,
        margin=s.margin,
        instances=instances,
        r1_bootstrap=s.r1_bootstrap,
    )


def _closest_pair_clearance(instances: list[SiteInstance]) -> tuple[float, Optional[Point]]:
    """Minimum distance between distinct instances and a midpoint witness."""
    n = len(instances)
    if n < 2:
        return math.inf, None
    bounds = np.array([inst.shape.bounds() for inst in instances])
    # Lower-bound pair distances by bbox gaps, then refine the best few.
    gx = np.maximum(
        bounds[:, None, 0] - bounds[None, :, 2], bounds[None, :, 0] - bounds[:, None, 2]
    )
    gy = np.maximum(
        bounds[:, None, 1] - bounds[None, :, 3], bounds[None, :, 1] - bounds[:, None, 3]
    )
    gap = np.hypot(np.maximum(gx, 0.0), np.maximum(gy, 0.0))
    iu = np.triu_indices(n, k=1)
    order = np.argsort(gap[iu], kind="stable")
    best = math.inf
    best_pair = None
    for idx in order:
        a, b = iu[0][idx], iu[1][idx]
        if gap[a, b] >= best:
            break
        d = shape_shape_distance(instances[a].shape, instances[b].shape)
        if d < best:
            best = d
            best_pair = (a, b)
    witness = None
    if best_pair is not None and best == 0.0:
        a, b = best_pair
        witness = _contact_point(instances[a].shape, instances[b].shape)
    return best, witness


def _contact_point(a: SiteShape, b: SiteShape) -> Optional[Point]:
    from .geometry import segments_intersect, segment_intersection_point

    for sa in a.as_array():
        for sb in b.as_array():
            if segments_intersect(sa, sb):
                return segment_intersection_point(sa, sb)
    return None


def validate_delone(s: SiteSet, probe_resolution: int = 512) -> DeloneReport:
    """Estimate the spacing radii over the window.

    ``r1`` is the worst covering distance seen on the probe grid; ``r0`` is
    half the smallest clearance between distinct instances.
    """
    if probe_resolution < 64:
        raise ValidationError("probe_resolution must be >= 64")
    r1 = _max_min_distance(s.instances, s.window, probe_resolution)
    clearance, witness = _closest_pair_clearance(s.instances)
    r0 = 0.0 if not math.isfinite(clearance) else clearance / 2.0
    if not math.isfinite(clearance):
        r0 = math.inf
    return DeloneReport(
        uniformly_discrete=r0 > 0.0,
        relatively_dense=math.isfinite(r1),
        r0_estimate=r0,
        r1_estimate=r1,
        witness=witness if r0 == 0.0 else None,
    )
