import math

import numpy as np
import pytest

from curvetile.errors import ValidationError
from curvetile.geometry import Isometry2, Point, SiteShape, compose
from curvetile.wallpaper import (
    CURVED_CAPABLE,
    GROUP_NAMES,
    GROUP_ORDERS,
    HEX_FAMILY,
    REFLECTIVE_GROUPS,
    Rect,
    clear_anchor,
    group_table,
    lattice_for,
    mirror_axes,
    orbit,
    reflection_axes,
    replicate,
)

EXPECTED_ORDERS = {
    "p1": 1, "p2": 2, "pm": 2, "pg": 2, "cm": 4,
    "pmm": 4, "pmg": 4, "pgg": 4, "cmm": 8,
    "p4": 4, "p4m": 8, "p4g": 8,
    "p3": 3, "p3m1": 6, "p31m": 6, "p6": 6, "p6m": 12,
}

GLIDE_GROUPS = {"pg", "cm", "pmg", "pgg", "cmm", "p4m", "p4g", "p3m1", "p31m", "p6m"}


@pytest.mark.parametrize("name", GROUP_NAMES)
class TestGroupAxioms:
    def test_order(self, name):
        assert group_table(name, 1.0).op_count() == EXPECTED_ORDERS[name]
        assert GROUP_ORDERS[name] == EXPECTED_ORDERS[name]

    def test_closure_identity_inverse(self, name):
        t = group_table(name, 1.25)
        k0, cell0 = t.reduce(Isometry2.identity())
        assert k0 == 0 and cell0 == (0, 0)
        for a in t.ops:
            t.reduce(a.inverse())
            for b in t.ops:
                t.reduce(compose(a, b))  # raises if not closed

    def test_orientation_census(self, name):
        t = group_table(name, 1.0)
        neg = sum(1 for op in t.ops if op.det < 0)
        if name in ("p1", "p2", "p4", "p3", "p6"):
            assert neg == 0
        else:
            assert neg == len(t.ops) // 2

    def test_translations_reduced_to_unit_cell(self, name):
        t = group_table(name, 1.0)
        for op in t.ops:
            frac = t.lattice.to_lattice(op.translation)
            assert np.all(frac >= -1e-12) and np.all(frac < 1 - 1e-12)

    def test_meta_flags(self, name):
        t = group_table(name, 1.0)
        assert t.meta.has_reflection == (name in REFLECTIVE_GROUPS)
        assert t.meta.curved_capable == (name in CURVED_CAPABLE)
        assert t.meta.has_glide == (name in GLIDE_GROUPS)
        assert t.meta.family == ("hex" if name in HEX_FAMILY else "square")


class TestLattice:
    def test_square(self):
        lat = lattice_for("p4", 2.0)
        assert lat.t1 == (2.0, 0.0)
        assert lat.t2 == (0.0, 2.0)

    def test_hex(self):
        lat = lattice_for("p6", 2.0)
        assert lat.t2 == (1.0, math.sqrt(3.0))

    def test_bad_group_and_scale(self):
        with pytest.raises(ValidationError):
            group_table("p8", 1.0)
        with pytest.raises(ValidationError):
            group_table("p4", 0.0)
        with pytest.raises(ValidationError):
            group_table("p4", float("inf"))


class TestOrbit:
    def test_p2_point(self):
        t = group_table("p2", 1.0)
        shapes = orbit(SiteShape.from_points([Point(0.2, 0.3)]), t)
        got = sorted(tuple(np.round(s.as_array()[0, :2], 9)) for s in shapes)
        assert got == [(-0.2, -0.3), (0.2, 0.3)]

    def test_p4_point(self):
        t = group_table("p4", 1.0)
        shapes = orbit(SiteShape.from_points([Point(0.1, 0.2)]), t)
        got = {tuple(np.round(s.as_array()[0, :2], 9)) for s in shapes}
        assert got == {(0.1, 0.2), (-0.2, 0.1), (-0.1, -0.2), (0.2, -0.1)}

    def test_p3_point(self):
        t = group_table("p3", 1.0)
        r = 0.3
        shapes = orbit(SiteShape.from_points([Point(r, 0)]), t)
        got = {tuple(np.round(s.as_array()[0, :2], 9)) for s in shapes}
        expect = {
            (r, 0.0),
            (round(-r / 2, 9), round(r * math.sqrt(3) / 2, 9)),
            (round(-r / 2, 9), round(-r * math.sqrt(3) / 2, 9)),
        }
        assert got == expect

    @pytest.mark.parametrize("name", GROUP_NAMES)
    def test_orbit_count_and_stability(self, name):
        t = group_table(name, 1.0)
        shape = SiteShape.from_points([Point(0.13, 0.21), Point(0.22, 0.28)])
        shapes = orbit(shape, t)
        assert len(shapes) == len(t.ops)
        # applying any op permutes the orbit modulo lattice translations
        for g in t.ops:
            seen = set()
            for op in t.ops:
                k, _cell = t.reduce(compose(g, op))
                seen.add(k)
            assert seen == set(range(len(t.ops)))


class TestReplicate:
    def test_counting_example(self):
        # point at the cell center, unit lattice, 2x2 window, margin 1:
        # translates -1..2 on each axis -> 16 instances
        lat = lattice_for("p1", 1.0)
        shape = SiteShape.from_points([Point(0.5, 0.5)])
        out = replicate([shape], lat, Rect(0, 0, 2, 2), 1.0)
        assert len(out) == 16
        cells = {inst.cell for inst in out}
        assert cells == {(i, j) for i in range(-1, 3) for j in range(-1, 3)}

    def test_outside_window_zero(self):
        lat = lattice_for("p1", 1.0)
        shape = SiteShape.from_points([Point(0.5, 0.5)])
        # window fully between lattice copies is impossible for points on
        # an integer lattice; push the window off to a fractional sliver
        out = replicate([shape], lat, Rect(0.6, 0.6, 0.9, 0.9), 0.0)
        assert out == []

    def test_emitted_exactly_once(self):
        lat = lattice_for("p6", 1.3)
        shape = SiteShape.from_points([Point(0.3, 0.2), Point(0.5, 0.4)])
        out = replicate([shape, shape], lat, Rect(-1, -1, 2, 2), 0.7)
        keys = [inst.key() for inst in out]
        assert len(keys) == len(set(keys))

    def test_margin_monotone(self):
        rng = np.random.default_rng(23)
        for _ in range(20):
            name = GROUP_NAMES[rng.integers(len(GROUP_NAMES))]
            lat = lattice_for(name, float(rng.uniform(0.5, 2.0)))
            pts = rng.uniform(0, 1, (3, 2))
            shape = SiteShape.from_points([Point(*q) for q in pts])
            window = Rect(0, 0, float(rng.uniform(1, 3)), float(rng.uniform(1, 3)))
            margins = sorted(rng.uniform(0, 3, 3))
            counts = [len(replicate([shape], lat, window, m)) for m in margins]
            assert counts == sorted(counts)

    def test_degenerate_window(self):
        lat = lattice_for("p1", 1.0)
        shape = SiteShape.from_points([Point(0.5, 0.5)])
        with pytest.raises(ValidationError):
            replicate([shape], lat, Rect(0, 0, 0, 1), 0.1)


class TestMirrorAxes:
    def test_pm_axes_horizontal_half_spacing(self):
        t = group_table("pm", 1.0)
        axes = mirror_axes(t, Rect(0, 0, 1, 1))
        ys = sorted(round(a.point[1], 9) for a in axes)
        assert all(a.direction == (1.0, 0.0) for a in axes)
        for y in ys:
            assert abs(y * 2 - round(y * 2)) < 1e-9
        assert 0.0 in ys and 0.5 in ys

    def test_pg_has_no_mirrors(self):
        t = group_table("pg", 1.0)
        assert mirror_axes(t, Rect(-1, -1, 2, 2)) == []
        kinds = {a.kind for a in reflection_axes(t.lattice, t.ops)}
        assert kinds == {"glide"}

    def test_pmm_has_no_glides(self):
        t = group_table("pmm", 1.0)
        kinds = {a.kind for a in reflection_axes(t.lattice, t.ops)}
        assert kinds == {"mirror"}

    def test_p4m_has_four_directions(self):
        t = group_table("p4m", 1.0)
        axes = mirror_axes(t, Rect(0, 0, 1, 1))
        dirs = {a.direction for a in axes}
        assert len(dirs) == 4

    def test_rotation_groups_have_none(self):
        for name in ("p1", "p2", "p4", "p3", "p6"):
            t = group_table(name, 1.0)
            assert mirror_axes(t, Rect(-1, -1, 1, 1)) == []

    def test_p4g_diagonal_mirrors_exist(self):
        t = group_table("p4g", 1.0)
        axes = mirror_axes(t, Rect(0, 0, 1, 1))
        dirs = {a.direction for a in axes}
        s = math.sqrt(0.5)
        assert any(
            abs(abs(d[0]) - s) < 1e-9 and abs(abs(d[1]) - s) < 1e-9 for d in dirs
        )
        # axis-parallel reflections in p4g are glides, not mirrors
        assert not any(abs(d[0]) < 1e-9 or abs(d[1]) < 1e-9 for d in dirs)


class TestClearAnchor:
    @pytest.mark.parametrize("name", GROUP_NAMES)
    def test_positive_clearance(self, name):
        t = group_table(name, 1.0)
        anchor, clearance = clear_anchor(t)
        assert clearance > 0.15
        # the anchor's orbit images really are that far away
        p = anchor.as_array()
        basis = t.lattice.basis()
        worst = math.inf
        for k, op in enumerate(t.ops):
            img = op.apply(p)
            for i in range(-3, 4):
                for j in range(-3, 4):
                    if k == 0 and i == 0 and j == 0:
                        continue
                    q = img + basis @ np.array([i, j], float)
                    worst = min(worst, float(np.linalg.norm(q - p)))
        assert worst == pytest.approx(clearance, rel=1e-9)
