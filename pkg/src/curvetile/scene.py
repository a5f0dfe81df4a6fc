"""Scene file: the JSON description of one tiling design.

Parsing is strict: unknown fields, unknown groups, and non-finite numbers
are rejected with the offending field named.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .curves import (
    DEFAULT_FLATTEN_LEVELS,
    CatmullRomChain,
    CubicBezier,
    HermiteSegment,
    catmullrom_to_beziers,
    flatten_chain,
    hermite_to_bezier,
)
from .errors import ValidationError
from .geometry import Point, SiteShape
from .wallpaper import GROUP_NAMES, Rect, lattice_for

STROKE_KINDS = ("polyline", "hermite", "catmullrom", "bezier")
MAX_RESOLUTION = 4096


@dataclass(frozen=True)
class StrokeSpec:
    kind: str
    points: tuple[tuple[float, float], ...]
    tangents: tuple[tuple[float, float], ...] = ()
    parameterization: str = "uniform"
    flatten_levels: int = DEFAULT_FLATTEN_LEVELS


@dataclass(frozen=True)
class SceneFile:
    group: str
    scale: float
    strokes: tuple[StrokeSpec, ...]
    resolution: int
    seed: int = 0
    window: Optional[Rect] = None
    cells: Optional[tuple[int, int]] = None


def _expect_keys(obj: dict, required: set[str], optional: set[str], where: str) -> None:
    unknown = set(obj) - required - optional
    if unknown:
        raise ValidationError(f"unknown field(s) {sorted(unknown)}", field=where)
    missing = required - set(obj)
    if missing:
        raise ValidationError(f"missing field(s) {sorted(missing)}", field=where)


def _finite_number(v, where: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ValidationError("expected a number", field=where)
    if not math.isfinite(v):
        raise ValidationError("number must be finite", field=where)
    return float(v)


def _point_list(v, where: str, minimum: int = 1) -> tuple[tuple[float, float], ...]:
    if not isinstance(v, list) or len(v) < minimum:
        raise ValidationError(f"expected a list of at least {minimum} points", field=where)
    out = []
    for i, p in enumerate(v):
        if not isinstance(p, list) or len(p) != 2:
            raise ValidationError("expected [x, y]", field=f"{where}[{i}]")
        out.append(
            (
                _finite_number(p[0], f"{where}[{i}][0]"),
                _finite_number(p[1], f"{where}[{i}][1]"),
            )
        )
    return tuple(out)


def _parse_stroke(obj, idx: int) -> StrokeSpec:
    where = f"strokes[{idx}]"
    if not isinstance(obj, dict):
        raise ValidationError("expected an object", field=where)
    kind = obj.get("kind")
    if kind not in STROKE_KINDS:
        raise ValidationError(
            f"kind must be one of {list(STROKE_KINDS)}", field=f"{where}.kind"
        )
    required = {"kind", "points"}
    optional = {"flatten_levels"} if kind != "polyline" else set()
    if kind == "hermite":
        required |= {"tangents"}
    elif kind == "catmullrom":
        optional |= {"parameterization"}
    _expect_keys(obj, required, optional, where)

    points = _point_list(obj["points"], f"{where}.points")
    tangents: tuple = ()
    parameterization = "uniform"
    levels = obj.get("flatten_levels", DEFAULT_FLATTEN_LEVELS)
    if not isinstance(levels, int) or isinstance(levels, bool) or not (0 <= levels <= 8):
        raise ValidationError(
            "flatten_levels must be an integer in [0, 8]", field=f"{where}.flatten_levels"
        )
    if kind == "hermite":
        if len(points) != 2:
            raise ValidationError("hermite stroke needs exactly 2 points", field=f"{where}.points")
        tangents = _point_list(obj["tangents"], f"{where}.tangents", minimum=2)
        if len(tangents) != 2:
            raise ValidationError("hermite stroke needs exactly 2 tangents", field=f"{where}.tangents")
    elif kind == "catmullrom":
        if len(points) < 2:
            raise ValidationError("catmullrom stroke needs at least 2 points", field=f"{where}.points")
        parameterization = obj.get("parameterization", "uniform")
        if parameterization not in ("uniform", "centripetal"):
            raise ValidationError(
                "parameterization must be 'uniform' or 'centripetal'",
                field=f"{where}.parameterization",
            )
    elif kind == "bezier":
        if len(points) < 4 or (len(points) - 1) % 3 != 0:
            raise ValidationError(
                "bezier stroke needs 3k+1 control points", field=f"{where}.points"
            )
    return StrokeSpec(
        kind=kind,
        points=points,
        tangents=tangents,
        parameterization=parameterization,
        flatten_levels=levels,
    )


def parse_scene(text: str) -> SceneFile:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ValidationError("scene must be a JSON object")
    _expect_keys(
        obj,
        required={"group", "scale", "strokes", "resolution"},
        optional={"window", "cells", "seed"},
        where="scene",
    )
    group = obj["group"]
    if group not in GROUP_NAMES:
        raise ValidationError(f"unknown group {group!r}", field="group")
    scale = _finite_number(obj["scale"], "scale")
    if scale <= 0:
        raise ValidationError("scale must be > 0", field="scale")
    if not isinstance(obj["strokes"], list) or not obj["strokes"]:
        raise ValidationError("expected a non-empty list", field="strokes")
    strokes = tuple(_parse_stroke(s, i) for i, s in enumerate(obj["strokes"]))
    resolution = obj["resolution"]
    if not isinstance(resolution, int) or isinstance(resolution, bool):
        raise ValidationError("resolution must be an integer", field="resolution")
    if not (8 <= resolution <= MAX_RESOLUTION):
        raise ValidationError(
            f"resolution must be in [8, {MAX_RESOLUTION}]", field="resolution"
        )
    seed = obj.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ValidationError("seed must be an integer", field="seed")

    window = None
    cells = None
    if ("window" in obj) == ("cells" in obj):
        raise ValidationError("exactly one of 'window' or 'cells' is required", field="scene")
    if "window" in obj:
        w = obj["window"]
        if not isinstance(w, list) or len(w) != 4:
            raise ValidationError("window must be [x0, y0, x1, y1]", field="window")
        vals = [_finite_number(v, f"window[{i}]") for i, v in enumerate(w)]
        if vals[2] <= vals[0] or vals[3] <= vals[1]:
            raise ValidationError("window must have positive extent", field="window")
        window = Rect(*vals)
    else:
        c = obj["cells"]
        if (
            not isinstance(c, list)
            or len(c) != 2
            or not all(isinstance(v, int) and not isinstance(v, bool) and v >= 1 for v in c)
        ):
            raise ValidationError("cells must be [m, n] with positive integers", field="cells")
        cells = (c[0], c[1])
    return SceneFile(
        group=group,
        scale=scale,
        strokes=strokes,
        resolution=resolution,
        seed=seed,
        window=window,
        cells=cells,
    )


def serialize_scene(scene: SceneFile) -> str:
    obj: dict = {
        "group": scene.group,
        "scale": scene.scale,
        "strokes": [],
        "resolution": scene.resolution,
        "seed": scene.seed,
    }
    if scene.window is not None:
        obj["window"] = [scene.window.x0, scene.window.y0, scene.window.x1, scene.window.y1]
    else:
        obj["cells"] = list(scene.cells)
    for s in scene.strokes:
        d: dict = {"kind": s.kind, "points": [list(p) for p in s.points]}
        if s.kind == "hermite":
            d["tangents"] = [list(t) for t in s.tangents]
        if s.kind == "catmullrom":
            d["parameterization"] = s.parameterization
        if s.kind != "polyline":
            d["flatten_levels"] = s.flatten_levels
        obj["strokes"].append(d)
    return json.dumps(obj, sort_keys=True)


def stroke_to_shape(stroke: StrokeSpec) -> SiteShape:
    """Flatten one stroke description into a segment shape."""
    pts = [Point(x, y) for x, y in stroke.points]
    if stroke.kind == "polyline":
        return SiteShape.from_points(pts)
    if stroke.kind == "hermite":
        bez = hermite_to_bezier(
            HermiteSegment(pts[0], pts[1], stroke.tangents[0], stroke.tangents[1])
        )
        return flatten_chain([bez], stroke.flatten_levels)
    if stroke.kind == "catmullrom":
        chain = CatmullRomChain(tuple(pts), stroke.parameterization)
        return flatten_chain(catmullrom_to_beziers(chain), stroke.flatten_levels)
    beziers = [
        CubicBezier(pts[i], pts[i + 1], pts[i + 2], pts[i + 3])
        for i in range(0, len(pts) - 1, 3)
    ]
    return flatten_chain(beziers, stroke.flatten_levels)


def scene_window(scene: SceneFile) -> Rect:
    """The world window: explicit, or the bounding box of m x n cells."""
    if scene.window is not None:
        return scene.window
    m, n = scene.cells
    lattice = lattice_for(scene.group, scene.scale)
    corners = np.array([[0, 0], [m, 0], [0, n], [m, n]], dtype=np.float64) @ lattice.basis().T
    return Rect(
        float(corners[:, 0].min()),
        float(corners[:, 1].min()),
        float(corners[:, 0].max()),
        float(corners[:, 1].max()),
    )
