"""The 17 plane symmetry groups as finite coset-representative tables.

Each table holds the group's operations modulo lattice translations, in the
conventional setting: highest-order rotation center at the origin, mirror
axes through the origin where the setting allows.  Centered groups (cm,
cmm) are expanded onto the conventional cell, so their tables carry the
centering translation explicitly (4 and 8 representatives).

Translations in the tables below are written in lattice coordinates and
converted to world units when a table is instantiated at a given scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ValidationError
from .geometry import Isometry2, Point, SiteShape, apply_isometry

SQRT3 = math.sqrt(3.0)

GROUP_NAMES = (
    "p1", "p2", "pm", "pg", "cm", "pmm", "pmg", "pgg", "cmm",
    "p4", "p4m", "p4g",
    "p3", "p3m1", "p31m", "p6", "p6m",
)

SQUARE_FAMILY = frozenset(
    ("p1", "p2", "pm", "pg", "cm", "pmm", "pmg", "pgg", "cmm", "p4", "p4m", "p4g")
)
HEX_FAMILY = frozenset(("p3", "p3m1", "p31m", "p6", "p6m"))

# Groups whose Voronoi boundaries can curve; the complement all contain a
# mirror or (for pgg) behave degenerately in practice.
CURVED_CAPABLE = frozenset(("p1", "p2", "pg", "p4", "p3", "p6"))
REFLECTIVE_GROUPS = frozenset(
    ("pm", "cm", "pmm", "pmg", "cmm", "p4m", "p4g", "p3m1", "p31m", "p6m")
)

_I = ((1, 0), (0, 1))
_R90 = ((0, -1), (1, 0))
_R180 = ((-1, 0), (0, -1))
_R270 = ((0, 1), (-1, 0))
_MX = ((1, 0), (0, -1))      # mirror across the x-axis
_MY = ((-1, 0), (0, 1))      # mirror across the y-axis
_MD = ((0, 1), (1, 0))       # mirror across y = x
_MD2 = ((0, -1), (-1, 0))    # mirror across y = -x

_C, _S = 0.5, SQRT3 / 2.0
_R60 = ((_C, -_S), (_S, _C))
_R120 = ((-_C, -_S), (_S, -_C))
_R240 = ((-_C, _S), (-_S, -_C))
_R300 = ((_C, _S), (-_S, _C))
# Reflections across lines through the origin at 30-degree steps.
_M0 = _MX
_M30 = ((_C, _S), (_S, -_C))
_M60 = ((-_C, _S), (_S, _C))
_M90 = _MY
_M120 = ((-_C, -_S), (-_S, _C))
_M150 = ((_C, -_S), (-_S, -_C))

_Z = (0.0, 0.0)
_H = (0.5, 0.0)
_HH = (0.5, 0.5)

# (linear, translation-in-lattice-coordinates) pairs per group.
_GROUP_DEFS: dict[str, tuple] = {
    "p1": ((_I, _Z),),
    "p2": ((_I, _Z), (_R180, _Z)),
    "pm": ((_I, _Z), (_MX, _Z)),
    "pg": ((_I, _Z), (_MX, _H)),
    "cm": ((_I, _Z), (_MX, _Z), (_I, _HH), (_MX, _HH)),
    "pmm": ((_I, _Z), (_R180, _Z), (_MX, _Z), (_MY, _Z)),
    "pmg": ((_I, _Z), (_R180, _Z), (_MX, _H), (_MY, _H)),
    "pgg": ((_I, _Z), (_R180, _Z), (_MX, _HH), (_MY, _HH)),
    "cmm": (
        (_I, _Z), (_R180, _Z), (_MX, _Z), (_MY, _Z),
        (_I, _HH), (_R180, _HH), (_MX, _HH), (_MY, _HH),
    ),
    "p4": ((_I, _Z), (_R90, _Z), (_R180, _Z), (_R270, _Z)),
    "p4m": (
        (_I, _Z), (_R90, _Z), (_R180, _Z), (_R270, _Z),
        (_MX, _Z), (_MY, _Z), (_MD, _Z), (_MD2, _Z),
    ),
    "p4g": (
        (_I, _Z), (_R90, _Z), (_R180, _Z), (_R270, _Z),
        (_MX, _HH), (_MY, _HH), (_MD, _HH), (_MD2, _HH),
    ),
    "p3": ((_I, _Z), (_R120, _Z), (_R240, _Z)),
    # All threefold centers sit on mirrors: axes at 30/90/150 degrees.
    "p3m1": ((_I, _Z), (_R120, _Z), (_R240, _Z), (_M30, _Z), (_M90, _Z), (_M150, _Z)),
    # Mirrors along the lattice directions: axes at 0/60/120 degrees.
    "p31m": ((_I, _Z), (_R120, _Z), (_R240, _Z), (_M0, _Z), (_M60, _Z), (_M120, _Z)),
    "p6": ((_I, _Z), (_R60, _Z), (_R120, _Z), (_R180, _Z), (_R240, _Z), (_R300, _Z)),
    "p6m": (
        (_I, _Z), (_R60, _Z), (_R120, _Z), (_R180, _Z), (_R240, _Z), (_R300, _Z),
        (_M0, _Z), (_M30, _Z), (_M60, _Z), (_M90, _Z), (_M120, _Z), (_M150, _Z),
    ),
}

GROUP_ORDERS = {name: len(ops) for name, ops in _GROUP_DEFS.items()}

LATTICE_MATCH_TOL = 1e-9


@dataclass(frozen=True)
class Rect:
    x0: float
    y0: float
    x1: float
    y1: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.x0, self.y0, self.x1, self.y1)):
            raise ValidationError("non-finite window")

    @property
    def width(self) -> float:
        return self.x1 - self.x0

    @property
    def height(self) -> float:
        return self.y1 - self.y0

    def expanded(self, margin: float) -> "Rect":
        return Rect(self.x0 - margin, self.y0 - margin, self.x1 + margin, self.y1 + margin)

    def contains(self, x: float, y: float) -> bool:
        return self.x0 <= x <= self.x1 and self.y0 <= y <= self.y1


@dataclass(frozen=True)
class Lattice:
    """Translation basis of the group; square or hexagonal at ``scale``."""

    t1: tuple[float, float]
    t2: tuple[float, float]
    scale: float

    def basis(self) -> np.ndarray:
        return np.array([[self.t1[0], self.t2[0]], [self.t1[1], self.t2[1]]], dtype=np.float64)

    def to_lattice(self, v: np.ndarray) -> np.ndarray:
        return np.linalg.solve(self.basis(), np.asarray(v, dtype=np.float64))

    def to_world(self, ij) -> np.ndarray:
        return self.basis() @ np.asarray(ij, dtype=np.float64)

    @property
    def cell_diameter(self) -> float:
        b = self.basis()
        return float(max(np.linalg.norm(b[:, 0]), np.linalg.norm(b[:, 1]), np.linalg.norm(b[:, 0] + b[:, 1])))


def lattice_for(name: str, scale: float) -> Lattice:
    if name in HEX_FAMILY:
        return Lattice((scale, 0.0), (scale / 2.0, scale * SQRT3 / 2.0), scale)
    return Lattice((scale, 0.0), (0.0, scale), scale)


@dataclass(frozen=True)
class GroupMeta:
    has_reflection: bool
    has_glide: bool
    family: str
    curved_capable: bool


@dataclass(frozen=True)
class GroupTable:
    name: str
    lattice: Lattice
    ops: tuple[Isometry2, ...]
    meta: GroupMeta = field(compare=False)

    def op_count(self) -> int:
        return len(self.ops)

    def reduce(self, g: Isometry2) -> tuple[int, tuple[int, int]]:
        """Find (op index, lattice cell) with ``g = translate(cell) . op``.

        Raises if ``g`` is not in the group.
        """
        for k, op in enumerate(self.ops):
            if not np.allclose(g.linear, op.linear, atol=LATTICE_MATCH_TOL, rtol=0.0):
                continue
            n = self.lattice.to_lattice(g.translation - op.translation)
            n_round = np.round(n)
            if np.max(np.abs(n - n_round)) <= LATTICE_MATCH_TOL:
                return k, (int(n_round[0]), int(n_round[1]))
        raise ValidationError(f"isometry not in group {self.name}")


def group_table(name: str, scale: float) -> GroupTable:
    """Build the coset-representative table for ``name`` at ``scale``."""
    if name not in _GROUP_DEFS:
        raise ValidationError(f"unknown group name {name!r}", field="group")
    if not (isinstance(scale, (int, float)) and math.isfinite(scale) and scale > 0):
        raise ValidationError("scale must be positive and finite", field="scale")
    lattice = lattice_for(name, float(scale))
    basis = lattice.basis()
    ops = tuple(
        Isometry2(np.array(lin, dtype=np.float64), basis @ np.array(tr, dtype=np.float64))
        for lin, tr in _GROUP_DEFS[name]
    )
    axes = reflection_axes(lattice, ops)
    meta = GroupMeta(
        has_reflection=any(a.kind == "mirror" for a in axes),
        has_glide=any(a.kind == "glide" for a in axes),
        family="hex" if name in HEX_FAMILY else "square",
        curved_capable=name in CURVED_CAPABLE,
    )
    return GroupTable(name=name, lattice=lattice, ops=ops, meta=meta)


@dataclass(frozen=True)
class AxisLine:
    """A reflection or glide line: point + unit direction + minimal glide."""

    point: tuple[float, float]
    direction: tuple[float, float]
    kind: str          # "mirror" | "glide"
    glide: float       # minimal translation along the axis, 0 for mirrors


def _axis_direction(linear: np.ndarray) -> np.ndarray:
    """Unit +1 eigenvector of a reflection matrix."""
    alpha = math.atan2(linear[1, 0], linear[0, 0]) / 2.0
    return np.array([math.cos(alpha), math.sin(alpha)])


def reflection_axes(
    lattice: Lattice, ops: Sequence[Isometry2], n_range: int = 2
) -> list[AxisLine]:
    """Classify orientation-reversing cosets into mirror and glide lines.

    Enumerates lattice-adjusted representatives in a small index range,
    groups them by fixed line, and reports the minimal glide per line.
    """
    basis = lattice.basis()
    lines: dict[tuple, float] = {}
    dirs: dict[tuple, tuple] = {}
    for op in ops:
        if op.det >= 0:
            continue
        d = _axis_direction(op.linear)
        nrm = np.array([-d[1], d[0]])
        for i in range(-n_range, n_range + 1):
            for j in range(-n_range, n_range + 1):
                t = op.translation + basis @ np.array([i, j], dtype=np.float64)
                glide = float(t @ d)
                offset = float((t @ nrm) / 2.0)
                dkey = (round(d[0], 9), round(d[1], 9))
                if dkey[0] < 0 or (dkey[0] == 0 and dkey[1] < 0):
                    dkey = (-dkey[0], -dkey[1])
                key = (dkey, round(offset / lattice.scale, 7))
                g = abs(glide)
                if key not in lines or g < lines[key]:
                    lines[key] = g
                    dirs[key] = (tuple(d), (float(t[0] / 2.0), float(t[1] / 2.0)))
    out = []
    for key, g in sorted(lines.items()):
        d, pt = dirs[key]
        kind = "mirror" if g <= LATTICE_MATCH_TOL * lattice.scale else "glide"
        out.append(AxisLine(point=pt, direction=d, kind=kind, glide=g))
    return out


def mirror_axes(table: GroupTable, region: Rect) -> list[AxisLine]:
    """All true mirror lines of the group that cross ``region``."""
    span = max(region.width, region.height, 1.0)
    n_range = int(math.ceil(span / table.lattice.scale)) + 2
    axes = reflection_axes(table.lattice, table.ops, n_range=n_range)
    out = []
    cx, cy = (region.x0 + region.x1) / 2.0, (region.y0 + region.y1) / 2.0
    half_diag = math.hypot(region.width, region.height) / 2.0
    for a in axes:
        if a.kind != "mirror":
            continue
        nx, ny = -a.direction[1], a.direction[0]
        dist = abs((cx - a.point[0]) * nx + (cy - a.point[1]) * ny)
        if dist <= half_diag:
            out.append(a)
    return out


def orbit(shape: SiteShape, table: GroupTable) -> list[SiteShape]:
    """One transformed copy of the shape per table operation."""
    return [apply_isometry(op, shape) for op in table.ops]


@dataclass(frozen=True)
class SiteInstance:
    """A shape placed by a group operation plus a lattice translation."""

    shape: SiteShape
    orbit_index: int
    cell: tuple[int, int]

    def key(self) -> tuple[int, int, int]:
        return (self.orbit_index, self.cell[0], self.cell[1])


def replicate(
    orbit_shapes: Sequence[SiteShape], lattice: Lattice, window: Rect, margin: float
) -> list[SiteInstance]:
    """Every lattice translate of each orbit shape whose bounding box meets
    the window expanded by ``margin``, each exactly once."""
    if window.width <= 0 or window.height <= 0:
        raise ValidationError("window is degenerate")
    if margin < 0:
        raise ValidationError("margin must be >= 0")
    wx0, wy0 = window.x0 - margin, window.y0 - margin
    wx1, wy1 = window.x1 + margin, window.y1 + margin
    basis = lattice.basis()
    inv = np.linalg.inv(basis)
    out: list[SiteInstance] = []
    for k, shape in enumerate(orbit_shapes):
        bx0, by0, bx1, by1 = shape.bounds()
        # Translations v = B(i, j) for which bbox + v meets the expanded window.
        rx0, rx1 = wx0 - bx1, wx1 - bx0
        ry0, ry1 = wy0 - by1, wy1 - by0
        corners = np.array([[rx0, ry0], [rx0, ry1], [rx1, ry0], [rx1, ry1]], dtype=np.float64)
        ij = corners @ inv.T
        i_lo, j_lo = np.floor(ij.min(axis=0)).astype(int) - 1
        i_hi, j_hi = np.ceil(ij.max(axis=0)).astype(int) + 1
        arr = shape.as_array()
        for j in range(j_lo, j_hi + 1):
            for i in range(i_lo, i_hi + 1):
                vx = basis[0, 0] * i + basis[0, 1] * j
                vy = basis[1, 0] * i + basis[1, 1] * j
                if rx0 <= vx <= rx1 and ry0 <= vy <= ry1:
                    moved = arr + np.array([vx, vy, vx, vy])
                    out.append(
                        SiteInstance(
                            shape=SiteShape(moved, source=shape.source),
                            orbit_index=k,
                            cell=(i, j),
                        )
                    )
    out.sort(key=lambda inst: inst.key())
    return out


def clear_anchor(table: GroupTable, grid: int = 48) -> tuple[Point, float]:
    """Point of the unit cell with the largest orbit clearance.

    Clearance at p is the minimum distance from p to any of its images
    under a non-identity group element (including pure lattice
    translations); strokes confined to a disk of radius clearance/2 around
    the anchor can never collide with their own orbit.
    """
    basis = table.lattice.basis()
    us = (np.arange(grid) + 0.5) / grid
    uu, vv = np.meshgrid(us, us, indexing="ij")
    pts = np.stack([uu.ravel(), vv.ravel()], axis=1) @ basis.T
    # Images of cell points land within a few cells; +-3 covers every case.
    shifts = [
        basis @ np.array([i, j], dtype=np.float64)
        for i in range(-3, 4)
        for j in range(-3, 4)
    ]
    mins = np.full(pts.shape[0], np.inf)
    for op_idx, op in enumerate(table.ops):
        imgs = op.apply(pts)
        for sh in shifts:
            if op_idx == 0 and abs(sh[0]) < 1e-15 and abs(sh[1]) < 1e-15:
                continue
            d = np.linalg.norm(imgs + sh - pts, axis=1)
            np.minimum(mins, d, out=mins)
    # Prefer the most central point among near-ties for stable anchors.
    center = basis @ np.array([0.5, 0.5])
    bias = np.linalg.norm(pts - center, axis=1) * 1e-6
    k = int(np.argmax(mins - bias))
    return Point(float(pts[k, 0]), float(pts[k, 1])), float(mins[k])
