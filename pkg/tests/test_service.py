import base64
import json
import random

import pytest
from fastapi.testclient import TestClient

from curvetile.pipeline import run_pipeline
from curvetile.scene import parse_scene
from curvetile.service import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app(static_dir=""))


def scene_obj(**overrides):
    obj = {
        "group": "p2",
        "scale": 1.0,
        "strokes": [{"kind": "polyline", "points": [[0.6, 0.55], [0.86, 0.72]]}],
        "cells": [2, 2],
        "resolution": 96,
        "seed": 3,
    }
    obj.update(overrides)
    return obj


class TestGroupsEndpoint:
    def test_lists_all_17(self, client):
        r = client.get("/api/groups")
        assert r.status_code == 200
        rows = r.json()
        assert len(rows) == 17
        by_name = {row["name"]: row for row in rows}
        assert by_name["p1"]["order"] == 1
        assert by_name["p6m"]["order"] == 12
        assert by_name["pmm"]["has_reflection"] is True
        assert by_name["pg"]["has_reflection"] is False
        assert by_name["p3"]["curved_capable"] is True
        assert by_name["p4g"]["curved_capable"] is False
        assert {row["family"] for row in rows} == {"square", "hex"}


class TestTessellateEndpoint:
    def test_minimal_scene(self, client):
        r = client.post("/api/tessellate", content=json.dumps(scene_obj()))
        assert r.status_code == 200
        body = r.json()
        for key in ("png_base64", "arcs", "cells", "congruence", "straightness", "timing_ms", "svg"):
            assert key in body
        png = base64.b64decode(body["png_base64"])
        assert png[:8] == b"\x89PNG\r\n\x1a\n"
        assert body["arcs"]
        assert body["timing_ms"] > 0

    def test_unknown_group_400(self, client):
        r = client.post("/api/tessellate", content=json.dumps(scene_obj(group="p8")))
        assert r.status_code == 400
        assert r.json()["field"] == "group"

    def test_self_overlapping_stroke_422(self, client):
        bad = scene_obj(strokes=[{"kind": "polyline", "points": [[0.0, 0.0], [1.0, 1.0]]}])
        r = client.post("/api/tessellate", content=json.dumps(bad))
        assert r.status_code == 422
        body = r.json()
        assert body["stage"] == "sites"
        assert "overlap" in body["error"] or "not simple" in body["error"]

    def test_not_simple_stroke_422(self, client):
        bow = {
            "kind": "polyline",
            "points": [[0.5, 0.5], [0.7, 0.7], [0.7, 0.5], [0.5, 0.7]],
        }
        r = client.post("/api/tessellate", content=json.dumps(scene_obj(strokes=[bow])))
        assert r.status_code == 422

    def test_resolution_cap(self, client):
        r = client.post("/api/tessellate", content=json.dumps(scene_obj(resolution=4096)))
        assert r.status_code == 400
        assert r.json()["field"] == "resolution"

    def test_matches_in_process_pipeline(self, client):
        obj = scene_obj(seed=11)
        r = client.post("/api/tessellate", content=json.dumps(obj))
        result = run_pipeline(parse_scene(json.dumps(obj)))
        assert base64.b64decode(r.json()["png_base64"]) == result.png
        assert r.json()["svg"] == result.svg

    def test_stateless_shuffled_replay(self, client):
        scenes = [
            scene_obj(seed=i, strokes=[{"kind": "polyline", "points": [[0.55 + 0.02 * i, 0.55], [0.8, 0.7]]}])
            for i in range(5)
        ]
        first = [client.post("/api/tessellate", content=json.dumps(s)).json() for s in scenes]
        order = list(range(5))
        random.Random(99).shuffle(order)
        for i in order:
            again = client.post("/api/tessellate", content=json.dumps(scenes[i])).json()
            assert again["png_base64"] == first[i]["png_base64"]
            assert again["arcs"] == first[i]["arcs"]
            assert again["congruence"] == first[i]["congruence"]
