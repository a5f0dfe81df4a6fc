"""Label-map coloring and image/vector export.

Colors are pseudo-random in HSV, re-drawn deterministically on collision
so no two 4-adjacent regions share a color.  PNG output is 8-bit RGB with
byte-deterministic encoding; SVG output is world-unit polylines.
"""

from __future__ import annotations

import colorsys
import hashlib
import io
from dataclasses import dataclass, field

import numpy as np
from PIL import Image

from .errors import ValidationError
from .voronoi import BoundaryArc, LabelMap
from .wallpaper import Rect

SITE_GRAY = (200, 200, 200)


@dataclass(frozen=True)
class RenderOptions:
    show_sites: bool = True
    show_boundaries: bool = True
    boundary_width: int = 1
    color_by: str = "instance"          # "instance" | "orbit"
    background: tuple[int, int, int] = (255, 255, 255)

    def __post_init__(self):
        if self.boundary_width < 1:
            raise ValidationError("boundary_width must be >= 1")
        if self.color_by not in ("instance", "orbit"):
            raise ValidationError(f"unknown color_by {self.color_by!r}")


@dataclass
class Palette:
    seed: int
    assignment: dict[int, tuple[int, int, int]] = field(default_factory=dict)

    def lut(self, n: int) -> np.ndarray:
        table = np.zeros((n, 3), np.uint8)
        for k, rgb in self.assignment.items():
            if 0 <= k < n:
                table[k] = rgb
        return table


def _hash_color(seed: int, region_id: int, attempt: int) -> tuple[int, int, int]:
    digest = hashlib.blake2b(
        f"{seed}:{region_id}:{attempt}".encode(), digest_size=6
    ).digest()
    u = [int.from_bytes(digest[i : i + 2], "big") / 65535.0 for i in (0, 2, 4)]
    h = u[0]
    s = 0.35 + 0.40 * u[1]
    v = 0.70 + 0.25 * u[2]
    r, g, b = colorsys.hsv_to_rgb(h, s, v)
    return (int(r * 255), int(g * 255), int(b * 255))


def _adjacent_pairs(grid: np.ndarray) -> set[tuple[int, int]]:
    pairs = set()
    for a, b in (
        (grid[:, 1:], grid[:, :-1]),
        (grid[1:, :], grid[:-1, :]),
    ):
        diff = a != b
        lo = np.minimum(a[diff], b[diff])
        hi = np.maximum(a[diff], b[diff])
        codes = np.unique(lo.astype(np.int64) * (grid.max() + 1) + hi)
        for c in codes:
            pairs.add((int(c // (grid.max() + 1)), int(c % (grid.max() + 1))))
    return pairs


def make_palette(m: LabelMap, seed: int, color_by: str = "instance") -> Palette:
    """Deterministic colors with no 4-adjacent collisions.

    Ids are colored in ascending order; a collision with an
    already-colored neighbor re-draws from the hash stream.
    """
    grid = m.labels if color_by == "instance" else m.orbit_labels
    ids = [int(v) for v in np.unique(grid)]
    pairs = _adjacent_pairs(grid)
    neighbors: dict[int, set[int]] = {i: set() for i in ids}
    for a, b in pairs:
        neighbors[a].add(b)
        neighbors[b].add(a)
    palette = Palette(seed=seed)
    for i in ids:
        taken = {
            palette.assignment[j] for j in neighbors[i] if j in palette.assignment
        }
        attempt = 0
        color = _hash_color(seed, i, attempt)
        while color in taken:
            attempt += 1
            color = _hash_color(seed, i, attempt)
        palette.assignment[i] = color
    return palette


def render_png(
    m: LabelMap,
    arcs: list[BoundaryArc] | None,
    sites: list | None,
    palette: Palette,
    opts: RenderOptions = RenderOptions(),
) -> bytes:
    """8-bit RGB PNG of the tessellation; deterministic bytes.

    ``sites`` is unused for raster output (site strokes are stamped from
    the distance grid, which is exact); it is accepted for symmetry with
    ``export_svg``.
    """
    grid = m.labels if opts.color_by == "instance" else m.orbit_labels
    n = int(grid.max()) + 1
    rgb = palette.lut(n)[grid]
    if opts.show_boundaries and arcs is not None:
        mask = np.zeros(grid.shape, bool)
        mask[:, 1:] |= m.labels[:, 1:] != m.labels[:, :-1]
        mask[1:, :] |= m.labels[1:, :] != m.labels[:-1, :]
        for _ in range(opts.boundary_width - 1):
            grown = mask.copy()
            grown[1:, :] |= mask[:-1, :]
            grown[:-1, :] |= mask[1:, :]
            grown[:, 1:] |= mask[:, :-1]
            grown[:, :-1] |= mask[:, 1:]
            mask = grown
        rgb[mask] = (32, 32, 32)
    if opts.show_sites:
        half_width = max(1.0, opts.boundary_width) * m.spec.step
        rgb[m.distance <= half_width] = SITE_GRAY
    # Row 0 is the bottom scanline; flip for image convention.
    img = Image.fromarray(rgb[::-1], mode="RGB")
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()


def _fmt(v: float) -> str:
    return f"{v:.6f}"


def export_svg(
    arcs: list[BoundaryArc],
    sites: list,
    window: Rect,
    opts: RenderOptions = RenderOptions(),
) -> str:
    """SVG 1.1 text: one polyline path per arc and per site stroke, in
    world units with y up."""
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        (
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'viewBox="{_fmt(window.x0)} {_fmt(-window.y1)} '
            f'{_fmt(window.width)} {_fmt(window.height)}">'
        ),
        (
            f'<rect x="{_fmt(window.x0)}" y="{_fmt(-window.y1)}" '
            f'width="{_fmt(window.width)}" height="{_fmt(window.height)}" '
            f'fill="rgb({opts.background[0]},{opts.background[1]},{opts.background[2]})"/>'
        ),
    ]
    stroke_w = _fmt(window.width / 512.0)
    if opts.show_boundaries:
        for arc in arcs:
            pts = " ".join(f"{_fmt(p[0])},{_fmt(-p[1])}" for p in arc.points)
            parts.append(
                f'<polyline points="{pts}" fill="none" stroke="#202020" '
                f'stroke-width="{stroke_w}"/>'
            )
    if opts.show_sites:
        for shape in sites:
            arr = shape.as_array()
            chain = [f"{_fmt(arr[0, 0])},{_fmt(-arr[0, 1])}"]
            for row in arr:
                chain.append(f"{_fmt(row[2])},{_fmt(-row[3])}")
            parts.append(
                f'<polyline points="{" ".join(chain)}" fill="none" '
                f'stroke="#b4b4b4" stroke-width="{stroke_w}"/>'
            )
    parts.append("</svg>")
    return "\n".join(parts)
