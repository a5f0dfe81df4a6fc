"""Command-line interface: render, analyze, validate, survey, serve."""

from __future__ import annotations

import json
import pathlib
import sys

import click

from . import _backend
from .analysis import group_survey, random_segment_stroke
from .errors import PipelineError, ValidationError
from .pipeline import run_pipeline
from .render import RenderOptions
from .scene import parse_scene, scene_window, stroke_to_shape
from .sites import build_site_set, validate_delone
from .wallpaper import GROUP_NAMES

EXIT_VALIDATION = 1
EXIT_PIPELINE = 2


def _load_scene(path: str):
    try:
        text = pathlib.Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        click.echo(f"error: cannot read {path}: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    try:
        return parse_scene(text)
    except ValidationError as exc:
        click.echo(f"validation error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)


def _workers_option(fn):
    fn = click.option(
        "--workers", type=int, default=None, help="Kernel thread count (default: env or all cores)."
    )(fn)
    fn = click.option(
        "--deterministic", is_flag=True, help="Force single-threaded kernels (same output, slower)."
    )(fn)
    return fn


def _apply_workers(workers, deterministic):
    _backend.set_workers(1 if deterministic else workers)


@click.group()
def main():
    """Curved congruent tile designer: wallpaper-symmetric Voronoi tilings."""


@main.command()
@click.argument("scene_path", metavar="SCENE")
@click.option("-o", "--out", "out_dir", default="out", show_default=True, help="Output directory.")
@click.option("--color-by", type=click.Choice(["instance", "orbit"]), default="instance", show_default=True)
@_workers_option
def render(scene_path, out_dir, color_by, workers, deterministic):
    """Render SCENE to PNG + SVG + report."""
    _apply_workers(workers, deterministic)
    scene = _load_scene(scene_path)
    try:
        result = run_pipeline(scene, RenderOptions(color_by=color_by))
    except PipelineError as exc:
        click.echo(f"pipeline error: {exc}", err=True)
        sys.exit(EXIT_PIPELINE)
    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "tiling.png").write_bytes(result.png)
    (out / "tiling.svg").write_text(result.svg, encoding="utf-8")
    (out / "report.json").write_text(result.report_json(), encoding="utf-8")
    click.echo(f"wrote {out / 'tiling.png'}, {out / 'tiling.svg'}, {out / 'report.json'}")
    click.echo(f"pipeline took {result.timing_ms:.1f} ms")


@main.command()
@click.argument("scene_path", metavar="SCENE")
@_workers_option
def analyze(scene_path, workers, deterministic):
    """Run the pipeline on SCENE and print the analysis report."""
    _apply_workers(workers, deterministic)
    scene = _load_scene(scene_path)
    try:
        result = run_pipeline(scene)
    except PipelineError as exc:
        click.echo(f"pipeline error: {exc}", err=True)
        sys.exit(EXIT_PIPELINE)
    click.echo(result.report_json())


@main.command()
@click.argument("scene_path", metavar="SCENE")
@click.option("--probe", type=int, default=256, show_default=True, help="Probe grid resolution.")
@_workers_option
def validate(scene_path, probe, workers, deterministic):
    """Check SCENE: stroke simplicity, orbit overlap, spacing radii."""
    _apply_workers(workers, deterministic)
    scene = _load_scene(scene_path)
    try:
        shapes = [stroke_to_shape(s) for s in scene.strokes]
        site_set = build_site_set(shapes, scene.group, scene.scale, scene_window(scene))
        report = validate_delone(site_set, probe_resolution=probe)
    except ValidationError as exc:
        click.echo(f"validation error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    click.echo(json.dumps(report.as_dict(), sort_keys=True, indent=2))
    if not (report.uniformly_discrete and report.relatively_dense):
        sys.exit(EXIT_VALIDATION)


@main.command()
@click.option("--groups", default=",".join(GROUP_NAMES), show_default=False, help="Comma-separated group names (default: all 17).")
@click.option("--trials", type=int, default=10, show_default=True)
@click.option("--resolution", type=int, default=512, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("-o", "--out", "out_path", default=None, help="Write the survey table as JSON.")
@_workers_option
def survey(groups, trials, resolution, seed, out_path, workers, deterministic):
    """Random-stroke survey: which groups produce curved boundaries."""
    _apply_workers(workers, deterministic)
    names = [g.strip() for g in groups.split(",") if g.strip()]
    for g in names:
        if g not in GROUP_NAMES:
            click.echo(f"validation error: unknown group {g!r}", err=True)
            sys.exit(EXIT_VALIDATION)
    try:
        table = group_survey(
            random_segment_stroke, names, trials, resolution=resolution, seed=seed
        )
    except PipelineError as exc:
        click.echo(f"pipeline error: {exc}", err=True)
        sys.exit(EXIT_PIPELINE)
    click.echo(f"{'group':6s} {'curved%':>8s} {'straight-len%':>14s}  fixed-cells")
    for g, row in table.items():
        fixed = ""
        if "fixed_cells_consistent" in row:
            fixed = "consistent" if row["fixed_cells_consistent"] else "VARYING"
        click.echo(
            f"{g:6s} {100 * row['curved_fraction']:8.0f} "
            f"{100 * row['straight_length_fraction']:14.1f}  {fixed}"
        )
    if out_path:
        pathlib.Path(out_path).write_text(
            json.dumps(table, sort_keys=True, indent=2), encoding="utf-8"
        )
        click.echo(f"wrote {out_path}")


@main.command()
@click.option("--port", type=int, default=8077, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@_workers_option
def serve(port, host, workers, deterministic):
    """Serve the HTTP API (and the designer UI if built)."""
    import uvicorn

    from .service import create_app

    _apply_workers(workers, deterministic)
    _backend.warmup()
    uvicorn.run(create_app(), host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
