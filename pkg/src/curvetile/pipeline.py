"""End-to-end pipeline: strokes -> sites -> tessellation -> analysis ->
images, with stage names attached to failures."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

from .analysis import (
    MIN_ARC_PIXELS,
    QUANTIZATION_FLOOR_PIXELS,
    CellOutline,
    CongruenceReport,
    StraightnessReport,
    congruence_check,
    extract_cells,
    straightness_check,
)
from .errors import CurvetileError, PipelineError
from .render import RenderOptions, export_svg, make_palette, render_png
from .scene import SceneFile, scene_window, stroke_to_shape
from .sites import SiteSet, build_site_set
from .voronoi import (
    BoundaryArc,
    LabelMap,
    RasterSpec,
    equidistance_check,
    extract_boundaries,
    tessellate_accelerated,
)


@dataclass
class PipelineResult:
    scene: SceneFile
    site_set: SiteSet
    label_map: LabelMap
    arcs: list[BoundaryArc]
    cells: list[CellOutline]
    congruence: CongruenceReport
    straightness: StraightnessReport
    equidistance: float
    png: bytes
    svg: str
    timing_ms: float = field(default=0.0)

    def report(self) -> dict:
        """Deterministic analysis summary (no timings)."""
        px = self.label_map.spec.step
        return {
            "group": self.scene.group,
            "resolution": [self.label_map.spec.width, self.label_map.spec.height],
            "instances": len(self.site_set.instances),
            "arcs": len(self.arcs),
            "cells": len(self.cells),
            "congruence": self.congruence.as_dict(),
            "straightness": self.straightness.as_dict(),
            "equidistance_px": self.equidistance / px,
            "margin": self.site_set.margin,
        }

    def report_json(self) -> str:
        return json.dumps(self.report(), sort_keys=True, indent=2)


def _stage(name: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except CurvetileError as exc:
        raise PipelineError(name, exc) from exc


def run_pipeline(scene: SceneFile, opts: RenderOptions = RenderOptions()) -> PipelineResult:
    """Run every stage; deterministic for a fixed scene."""
    t0 = time.perf_counter()
    shapes = _stage("curves", lambda: [stroke_to_shape(s) for s in scene.strokes])
    window = _stage("scene", scene_window, scene)
    site_set = _stage(
        "sites", build_site_set, shapes, scene.group, scene.scale, window
    )
    spec = RasterSpec.fit(window, scene.resolution)
    label_map = _stage("voronoi", tessellate_accelerated, site_set, spec)
    arcs = _stage("voronoi", extract_boundaries, label_map)
    cells = _stage("analysis", extract_cells, label_map, arcs)
    congruence = _stage(
        "analysis", congruence_check, cells, site_set.table, 2.0 * spec.step
    )
    straightness = _stage(
        "analysis",
        straightness_check,
        arcs,
        min_length=MIN_ARC_PIXELS * spec.step,
        deviation_floor=QUANTIZATION_FLOOR_PIXELS * spec.step,
    )
    equidistance = _stage("analysis", equidistance_check, label_map, arcs)
    palette = _stage("render", make_palette, label_map, scene.seed, opts.color_by)
    png = _stage("render", render_png, label_map, arcs, None, palette, opts)
    svg = _stage(
        "render",
        export_svg,
        arcs,
        [inst.shape for inst in site_set.instances],
        spec.window,
        opts,
    )
    dt = (time.perf_counter() - t0) * 1000.0
    return PipelineResult(
        scene=scene,
        site_set=site_set,
        label_map=label_map,
        arcs=arcs,
        cells=cells,
        congruence=congruence,
        straightness=straightness,
        equidistance=equidistance,
        png=png,
        svg=svg,
        timing_ms=dt,
    )
