import numpy as np
import pytest

from curvetile.errors import ValidationError
from curvetile.geometry import Point, _point_segments_dist2, distance_point_shape
from curvetile.sites import build_site_set
from curvetile.voronoi import (
    RasterSpec,
    equidistance_check,
    extract_boundaries,
    tessellate,
    tessellate_accelerated,
)
from curvetile.wallpaper import Rect

from conftest import brute_labels, parabola_polyline, point_stroke, random_scene, segment_stroke


def two_point_scene():
    return build_site_set(
        [point_stroke(0.25, 0.5), point_stroke(0.75, 0.5)], "p1", 50.0, Rect(0, 0, 1, 1)
    )


class TestRasterSpec:
    def test_minimum_size(self):
        with pytest.raises(ValidationError):
            RasterSpec(Rect(0, 0, 1, 1), 4, 4)

    def test_aspect_mismatch(self):
        with pytest.raises(ValidationError):
            RasterSpec(Rect(0, 0, 2, 1), 64, 64)

    def test_fit_adjusts_top_edge(self):
        spec = RasterSpec.fit(Rect(0, 0, 3, 1.7), 96)
        assert spec.width == 96
        assert spec.window.y1 >= 1.7
        assert spec.window.y1 - 1.7 < spec.step + 1e-12


class TestTessellate:
    def test_two_point_halves(self):
        s = two_point_scene()
        # Smallest legal raster (8x8): pixel-center columns left of 0.5 are
        # nearer the left site, the rest the right one.
        m = tessellate(s, RasterSpec(Rect(0, 0, 1, 1), 8, 8))
        left = s.instances[m.labels[0, 0]].shape.as_array()[0, :2]
        assert tuple(left) == (0.25, 0.5)
        assert np.all(m.labels[:, :4] == m.labels[0, 0])
        assert np.all(m.labels[:, 4:] == m.labels[0, 7])
        assert m.labels[0, 0] != m.labels[0, 7]

    def test_single_site_distance_field(self):
        s = build_site_set([segment_stroke(0.3, 0.4, 0.7, 0.6)], "p1", 50.0, Rect(0, 0, 1, 1))
        spec = RasterSpec(Rect(0, 0, 1, 1), 16, 16)
        m = tessellate(s, spec)
        assert np.all(m.labels == m.labels[0, 0])
        xs, ys = spec.pixel_centers_x(), spec.pixel_centers_y()
        for r in range(0, 16, 3):
            for c in range(0, 16, 3):
                want = distance_point_shape(
                    Point(float(xs[c]), float(ys[r])),
                    s.instances[m.labels[r, c]].shape,
                )
                assert m.distance[r, c] == pytest.approx(want, abs=1e-12)

    def test_matches_literal_per_pixel_oracle(self):
        rng = np.random.default_rng(31)
        s, _ = random_scene(rng, "p4")
        spec = RasterSpec.fit(s.window, 24)
        m = tessellate(s, spec)
        labels, dist = brute_labels(s, spec)
        assert np.array_equal(m.labels, labels)
        assert np.allclose(m.distance, dist, atol=1e-12)

    def test_accelerated_equals_brute(self):
        rng = np.random.default_rng(41)
        for group in ("p1", "pg", "p4m", "p3", "p6m"):
            s, spec = random_scene(rng, group, resolution=160)
            a = tessellate(s, spec)
            b = tessellate_accelerated(s, spec)
            assert np.array_equal(a.labels, b.labels), group
            assert np.array_equal(a.distance, b.distance), group

    def test_orbit_labels_are_stroke_classes(self):
        s = build_site_set(
            [point_stroke(0.3, 0.3), point_stroke(0.75, 0.7)], "p2", 1.0, Rect(0, 0, 2, 2)
        )
        m = tessellate_accelerated(s, RasterSpec.fit(Rect(0, 0, 2, 2), 64))
        strokes = s.stroke_of_instance_array()
        assert np.array_equal(m.orbit_labels, strokes[m.labels])
        assert set(np.unique(m.orbit_labels)) == {0, 1}

    def test_empty_instances_error(self):
        s = two_point_scene()
        s.instances = []
        with pytest.raises(ValidationError):
            tessellate(s, RasterSpec(Rect(0, 0, 1, 1), 8, 8))


class TestBackendEquality:
    def test_numpy_and_numba_agree(self):
        numba = pytest.importorskip("numba")  # noqa: F841
        from curvetile import _kernels_numba as kn
        from curvetile import _kernels_numpy as kp

        rng = np.random.default_rng(51)
        s, spec = random_scene(rng, "p6", resolution=96)
        segs, owner = s.segment_arrays()
        args = (spec.window.x0, spec.window.y0, spec.step, spec.width, spec.height, segs, owner)
        for fa, fb in ((kn.label_brute, kp.label_brute), (kn.label_tiled, kp.label_tiled)):
            la, da = fa(*args)
            lb, db = fb(*args)
            assert np.array_equal(la, lb)
            assert np.array_equal(da, db)


class TestBoundaries:
    def test_two_halves_single_vertical_arc(self):
        s = two_point_scene()
        spec = RasterSpec(Rect(0, 0, 1, 1), 64, 64)
        m = tessellate(s, spec)
        arcs = extract_boundaries(m)
        assert len(arcs) == 1
        arc = arcs[0]
        assert np.all(np.abs(arc.points[:, 0] - 0.5) <= spec.step / 2 + 1e-12)
        assert arc.straightness <= 1e-9
        assert not arc.closed

    def test_uniform_map_no_arcs(self):
        s = build_site_set([point_stroke(0.5, 0.5)], "p1", 50.0, Rect(0, 0, 1, 1))
        m = tessellate(s, RasterSpec(Rect(0, 0, 1, 1), 16, 16))
        assert extract_boundaries(m) == []

    def test_every_crack_in_exactly_one_arc(self):
        rng = np.random.default_rng(61)
        for group in ("p2", "p4", "p3m1"):
            s, spec = random_scene(rng, group, resolution=128)
            m = tessellate_accelerated(s, spec)
            arcs = extract_boundaries(m)
            lab = m.labels
            n_cracks = int((lab[:, 1:] != lab[:, :-1]).sum() + (lab[1:, :] != lab[:-1, :]).sum())
            assert sum(a.n_cracks for a in arcs) == n_cracks

    def test_parabola_boundary(self):
        s = build_site_set(
            [point_stroke(0.0, 1.0), segment_stroke(-4.0, -1.0, 4.0, -1.0)],
            "p1",
            100.0,
            Rect(-2.0, -2.0, 2.0, 2.0),
        )
        spec = RasterSpec.fit(Rect(-2.0, -2.0, 2.0, 2.0), 256)
        m = tessellate_accelerated(s, spec)
        arcs = extract_boundaries(m)
        assert len(arcs) == 1
        arc = arcs[0]
        par = parabola_polyline()
        par_segs = np.hstack([par[:-1], par[1:]])
        dev = np.sqrt(_point_segments_dist2(arc.points, par_segs).min(axis=1)).max()
        assert dev <= 1.5 * spec.step
        assert arc.straightness > 0.05


class TestEquidistance:
    def test_two_point_bisector(self):
        s = two_point_scene()
        spec = RasterSpec(Rect(0, 0, 1, 1), 64, 64)
        m = tessellate(s, spec)
        arcs = extract_boundaries(m)
        err = equidistance_check(m, arcs)
        assert err <= spec.step * np.sqrt(2)

    def test_error_shrinks_with_resolution(self):
        rng = np.random.default_rng(71)
        s, _ = random_scene(rng, "p2")
        errs = []
        for res in (64, 128, 256):
            spec = RasterSpec.fit(s.window, res)
            m = tessellate_accelerated(s, spec)
            errs.append(equidistance_check(m, extract_boundaries(m)))
        assert errs[1] < errs[0]
        assert errs[2] < errs[1]


class TestFringeStability:
    def test_extra_ring_changes_nothing(self):
        from curvetile.sites import SiteSet
        from curvetile.wallpaper import replicate, orbit

        rng = np.random.default_rng(81)
        s, spec = random_scene(rng, "p4", resolution=128)
        ring = s.margin + s.lattice.cell_diameter
        orbit_shapes = []
        for stroke in s.strokes:
            orbit_shapes.extend(orbit(stroke, s.table))
        bigger = SiteSet(
            strokes=s.strokes,
            table=s.table,
            window=s.window,
            margin=ring,
            instances=replicate(orbit_shapes, s.lattice, s.window, ring),
            r1_bootstrap=s.r1_bootstrap,
        )
        assert len(bigger.instances) > len(s.instances)
        a = tessellate_accelerated(s, spec)
        b = tessellate_accelerated(bigger, spec)
        assert np.array_equal(a.keyed_labels(), b.keyed_labels())
        assert np.array_equal(a.distance, b.distance)


class TestSymmetryOfOutput:
    def test_orbit_labels_invariant_under_group_ops(self):
        rng = np.random.default_rng(91)
        s, spec = random_scene(rng, "p4", resolution=192)
        m = tessellate_accelerated(s, spec)
        w = spec.window
        xs, ys = spec.pixel_centers_x(), spec.pixel_centers_y()
        gx, gy = np.meshgrid(xs, ys)
        pts = np.stack([gx.ravel(), gy.ravel()], axis=1)
        # mask out pixels near any label change
        lab = m.labels
        near = np.zeros_like(lab, dtype=bool)
        near[:, 1:] |= lab[:, 1:] != lab[:, :-1]
        near[:, :-1] |= lab[:, 1:] != lab[:, :-1]
        near[1:, :] |= lab[1:, :] != lab[:-1, :]
        near[:-1, :] |= lab[1:, :] != lab[:-1, :]
        for op in s.table.ops[1:]:
            moved = op.apply(pts)
            cols = np.floor((moved[:, 0] - w.x0) / spec.step).astype(int)
            rows = np.floor((moved[:, 1] - w.y0) / spec.step).astype(int)
            ok = (
                (cols >= 0)
                & (cols < spec.width)
                & (rows >= 0)
                & (rows < spec.height)
                & ~near.ravel()
            )
            # also skip targets that land on a boundary pixel
            ok[ok] &= ~near[rows[ok], cols[ok]]
            src = m.orbit_labels.ravel()[ok.nonzero()[0]]
            dst = m.orbit_labels[rows[ok], cols[ok]]
            agree = float(np.mean(src == dst))
            assert agree >= 0.99, (op, agree)
