"""HTTP service backing the interactive designer.

Stateless: every request parses its own scene and runs the pipeline.
Scene validation failures return 400 with the offending field; pipeline
failures (bad strokes, orbit overlap) return 422 with the stage name.
"""

from __future__ import annotations

import base64
import pathlib

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from starlette.concurrency import run_in_threadpool

from .errors import PipelineError, ValidationError
from .pipeline import run_pipeline
from .scene import parse_scene
from .wallpaper import GROUP_NAMES, group_table

SERVER_MAX_RESOLUTION = 2048


def _arc_payload(arc) -> dict:
    return {
        "left": arc.left_label,
        "right": arc.right_label,
        "closed": arc.closed,
        "straightness": arc.straightness,
        "points": [[float(x), float(y)] for x, y in arc.points],
    }


def _cell_payload(cell) -> dict:
    return {
        "instance": cell.instance_id,
        "orbit": cell.orbit_id,
        "polygon": [[float(x), float(y)] for x, y in cell.polygon],
    }


def create_app(static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="curvetile", docs_url=None, redoc_url=None)

    @app.get("/api/groups")
    def groups() -> list[dict]:
        out = []
        for name in GROUP_NAMES:
            t = group_table(name, 1.0)
            out.append(
                {
                    "name": name,
                    "family": t.meta.family,
                    "order": t.op_count(),
                    "has_reflection": t.meta.has_reflection,
                    "curved_capable": t.meta.curved_capable,
                }
            )
        return out

    @app.post("/api/tessellate")
    async def tessellate_endpoint(request: Request):
        body = await request.body()
        try:
            scene = parse_scene(body.decode("utf-8"))
        except (ValidationError, UnicodeDecodeError) as exc:
            field = getattr(exc, "field", None)
            return JSONResponse(
                status_code=400, content={"error": str(exc), "field": field}
            )
        if scene.resolution > SERVER_MAX_RESOLUTION:
            return JSONResponse(
                status_code=400,
                content={
                    "error": f"resolution capped at {SERVER_MAX_RESOLUTION} server-side",
                    "field": "resolution",
                },
            )
        try:
            # threadpool keeps the event loop free; the kernels drop the GIL
            result = await run_in_threadpool(run_pipeline, scene)
        except PipelineError as exc:
            return JSONResponse(
                status_code=422, content={"error": str(exc.cause), "stage": exc.stage}
            )
        return {
            "png_base64": base64.b64encode(result.png).decode("ascii"),
            "svg": result.svg,
            "arcs": [_arc_payload(a) for a in result.arcs],
            "cells": [_cell_payload(c) for c in result.cells],
            "congruence": result.congruence.as_dict(),
            "straightness": result.straightness.as_dict(),
            "equidistance_px": result.equidistance / result.label_map.spec.step,
            "timing_ms": result.timing_ms,
        }

    if static_dir is None:
        candidate = pathlib.Path(__file__).resolve().parents[2] / "frontend" / "dist"
        static_dir = str(candidate) if candidate.is_dir() else None
    if static_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    return app
