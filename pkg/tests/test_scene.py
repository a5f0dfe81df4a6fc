import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvetile.errors import ValidationError
from curvetile.scene import (
    SceneFile,
    StrokeSpec,
    parse_scene,
    scene_window,
    serialize_scene,
    stroke_to_shape,
)

MINIMAL = {
    "group": "p1",
    "scale": 1.0,
    "strokes": [{"kind": "polyline", "points": [[0.4, 0.4], [0.6, 0.5]]}],
    "cells": [2, 2],
    "resolution": 64,
}


def scene_text(**overrides):
    obj = json.loads(json.dumps(MINIMAL))
    obj.update(overrides)
    return json.dumps(obj)


class TestParse:
    def test_minimal(self):
        scene = parse_scene(scene_text())
        assert scene.group == "p1"
        assert scene.cells == (2, 2)
        assert scene.seed == 0
        assert len(scene.strokes) == 1

    def test_unknown_group_names_field(self):
        with pytest.raises(ValidationError) as exc:
            parse_scene(scene_text(group="p8"))
        assert exc.value.field == "group"

    def test_unknown_top_level_field(self):
        with pytest.raises(ValidationError) as exc:
            parse_scene(scene_text(extra=1))
        assert "extra" in str(exc.value)

    def test_unknown_stroke_field(self):
        bad = {"kind": "polyline", "points": [[0, 0], [1, 1]], "color": "red"}
        with pytest.raises(ValidationError):
            parse_scene(scene_text(strokes=[bad]))

    def test_polyline_rejects_flatten_levels(self):
        bad = {"kind": "polyline", "points": [[0, 0], [1, 1]], "flatten_levels": 3}
        with pytest.raises(ValidationError):
            parse_scene(scene_text(strokes=[bad]))

    def test_non_finite_number(self):
        txt = scene_text().replace("1.0", "NaN", 1)
        with pytest.raises(ValidationError):
            parse_scene(txt)

    def test_bad_json(self):
        with pytest.raises(ValidationError):
            parse_scene("{nope")

    def test_window_and_cells_exclusive(self):
        with pytest.raises(ValidationError):
            parse_scene(scene_text(window=[0, 0, 1, 1]))

    def test_window_extent(self):
        obj = json.loads(scene_text())
        del obj["cells"]
        obj["window"] = [0, 0, 0, 1]
        with pytest.raises(ValidationError):
            parse_scene(json.dumps(obj))

    def test_resolution_bounds(self):
        with pytest.raises(ValidationError):
            parse_scene(scene_text(resolution=4))
        with pytest.raises(ValidationError):
            parse_scene(scene_text(resolution=100000))
        with pytest.raises(ValidationError):
            parse_scene(scene_text(resolution=2.5))

    def test_hermite_needs_tangents(self):
        bad = {"kind": "hermite", "points": [[0, 0], [1, 0]]}
        with pytest.raises(ValidationError):
            parse_scene(scene_text(strokes=[bad]))

    def test_bezier_control_count(self):
        bad = {"kind": "bezier", "points": [[0, 0], [1, 0], [2, 0]]}
        with pytest.raises(ValidationError):
            parse_scene(scene_text(strokes=[bad]))


stroke_strategy = st.one_of(
    st.builds(
        lambda pts: StrokeSpec(kind="polyline", points=tuple(pts)),
        st.lists(
            st.tuples(
                st.floats(-2, 2).map(lambda v: round(v, 6)),
                st.floats(-2, 2).map(lambda v: round(v, 6)),
            ),
            min_size=1,
            max_size=5,
        ),
    ),
    st.builds(
        lambda pts, tans, lv: StrokeSpec(
            kind="hermite", points=tuple(pts), tangents=tuple(tans), flatten_levels=lv
        ),
        st.lists(
            st.tuples(st.floats(-2, 2).map(lambda v: round(v, 6)), st.floats(-2, 2).map(lambda v: round(v, 6))),
            min_size=2,
            max_size=2,
        ),
        st.lists(
            st.tuples(st.floats(-2, 2).map(lambda v: round(v, 6)), st.floats(-2, 2).map(lambda v: round(v, 6))),
            min_size=2,
            max_size=2,
        ),
        st.integers(0, 6),
    ),
)


class TestRoundTrip:
    @settings(max_examples=60, deadline=None)
    @given(
        group=st.sampled_from(["p1", "p4", "p3m1"]),
        scale=st.floats(0.5, 4).map(lambda v: round(v, 6)),
        strokes=st.lists(stroke_strategy, min_size=1, max_size=3),
        resolution=st.integers(8, 1024),
        seed=st.integers(0, 2**31 - 1),
        cells=st.tuples(st.integers(1, 4), st.integers(1, 4)),
    )
    def test_serialize_parse_identity(self, group, scale, strokes, resolution, seed, cells):
        scene = SceneFile(
            group=group,
            scale=scale,
            strokes=tuple(strokes),
            resolution=resolution,
            seed=seed,
            cells=cells,
        )
        again = parse_scene(serialize_scene(scene))
        assert again == scene
        assert parse_scene(serialize_scene(again)) == again


class TestStrokeToShape:
    def test_polyline(self):
        shape = stroke_to_shape(StrokeSpec(kind="polyline", points=((0, 0), (1, 0), (1, 1))))
        assert len(shape) == 2

    def test_single_point_polyline(self):
        shape = stroke_to_shape(StrokeSpec(kind="polyline", points=((0.3, 0.4),)))
        assert shape.source == "point"

    def test_hermite_flattening(self):
        spec = StrokeSpec(
            kind="hermite",
            points=((0, 0), (3, 0)),
            tangents=((3, 3), (3, -3)),
            flatten_levels=3,
        )
        shape = stroke_to_shape(spec)
        assert len(shape) == 8
        arr = shape.as_array()
        assert arr[0, :2] == pytest.approx([0, 0])
        assert arr[-1, 2:] == pytest.approx([3, 0])

    def test_catmullrom(self):
        spec = StrokeSpec(
            kind="catmullrom",
            points=((0, 0), (1, 1), (2, 0)),
            flatten_levels=2,
        )
        assert len(stroke_to_shape(spec)) == 8

    def test_bezier_chain(self):
        spec = StrokeSpec(
            kind="bezier",
            points=((0, 0), (0, 1), (1, 1), (1, 0), (2, -1), (3, 1), (3, 0)),
            flatten_levels=1,
        )
        assert len(stroke_to_shape(spec)) == 4


class TestSceneWindow:
    def test_explicit(self):
        obj = json.loads(scene_text())
        del obj["cells"]
        obj["window"] = [0.0, 0.5, 2.0, 1.5]
        scene = parse_scene(json.dumps(obj))
        w = scene_window(scene)
        assert (w.x0, w.y0, w.x1, w.y1) == (0.0, 0.5, 2.0, 1.5)

    def test_square_cells(self):
        scene = parse_scene(scene_text(cells=[2, 3]))
        w = scene_window(scene)
        assert (w.x1, w.y1) == (2.0, 3.0)

    def test_hex_cells_bbox(self):
        scene = parse_scene(scene_text(group="p3", cells=[2, 2]))
        w = scene_window(scene)
        assert w.x1 == pytest.approx(3.0)
        assert w.y1 == pytest.approx(math.sqrt(3.0))
