import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unitpoly.errors import AnchorNotFoundError, ExhaustedCandidatesError, InputError, NoSliceError
from unitpoly.finder import (
    AnchorSearchConfig,
    FinderConfig,
    find_anchor_triangle,
    find_unit_cyclic_quad,
    iter_anchor_triangles,
    make_certificate,
    replay_trace,
    sweep_offsets,
    verify_certificate,
)
from unitpoly.geometry import circumcircle, distance, is_convex_ccw, polygon_area, triangle_angles
from unitpoly.regions import CellRegion, Rectangle, local_density


@pytest.fixture(scope="module")
def square():
    return CellRegion.from_predicate(Rectangle((0, 0), (10, 10)), (0, 0, 10, 10), 0.05)


@pytest.fixture(scope="module")
def square_result(square):
    return find_unit_cyclic_quad(square)


def check_quad(cert, region, area=1.0):
    verts = cert.vertices
    assert is_convex_ccw(verts)
    assert all(region.contains(p) for p in verts)
    assert polygon_area(verts) == pytest.approx(area, abs=1e-9 * area)
    circ = circumcircle(*verts[:3])
    assert distance(verts[3], circ.center) == pytest.approx(circ.radius, abs=1e-9 * circ.radius)


class TestAnchor:
    def test_square(self, square):
        res = find_anchor_triangle(square)
        tri = (res.A, res.B, res.C)
        assert polygon_area(tri) == pytest.approx(1.0, abs=1e-12)
        alpha, beta, _ = triangle_angles(*tri)
        assert 30 < alpha < 150 and 30 < beta < 150
        assert all(square.contains(p) for p in tri)
        assert res.density >= 0.99
        assert distance(res.A, res.B) == pytest.approx(res.triangle.c, rel=1e-12)

    def test_empty_region(self):
        with pytest.raises(NoSliceError):
            find_anchor_triangle(CellRegion(0.1, []))
        with pytest.raises(NoSliceError):
            find_unit_cyclic_quad(CellRegion(0.1, []))

    def test_single_row_has_no_anchor(self):
        strip = CellRegion(0.1, [(i, 0) for i in range(200)])
        with pytest.raises(AnchorNotFoundError) as info:
            find_unit_cyclic_quad(strip)
        assert info.value.trace.failure

    def test_every_anchor_meets_the_threshold(self):
        rng = np.random.default_rng(11)
        cells = [(i, j) for i in range(200) for j in range(200) if rng.uniform() > 0.002]
        reg = CellRegion(0.05, cells)
        for threshold in (0.9, 0.99):
            cfg = AnchorSearchConfig(density_threshold=threshold)
            for k, res in zip(range(5), iter_anchor_triangles(reg, cfg)):
                assert res.density >= threshold
                eps = 0.5 * reg.h
                assert local_density(reg, res.C, eps, "lower", res.frame.direction_to_world((0.0, 1.0))) >= threshold - 1e-12

    def test_threshold_only_filters(self):
        # a long thin strip: anchors exist with a vertical base and the apex far to the side
        strip = CellRegion(0.1, [(i, j) for i in range(200) for j in range(3)])
        cfg = AnchorSearchConfig(slice_retries=8, candidates_per_slice=20)
        low = list(iter_anchor_triangles(strip, replace(cfg, density_threshold=0.5)))
        high = list(iter_anchor_triangles(strip, replace(cfg, density_threshold=0.9)))
        assert low
        assert high == [a for a in low if a.density >= 0.9]

    def test_config_validation(self):
        with pytest.raises(InputError):
            AnchorSearchConfig(angle_margin=95)
        with pytest.raises(InputError):
            AnchorSearchConfig(density_threshold=1.5)
        with pytest.raises(InputError):
            FinderConfig(target_area=0.0)


class TestSweep:
    def test_nearest_first_within_each_level(self):
        offs = sweep_offsets(1.0, 3)
        assert offs[0] == (0.0, -0.5)
        assert all(dy < 0 and math.hypot(dx, dy) < 1 for dx, dy in offs)
        assert len(set(offs)) == len(offs)

    def test_levels_nest(self):
        coarse = sweep_offsets(1.0, 2)
        fine = sweep_offsets(1.0, 4)
        assert fine[: len(coarse)] == coarse


class TestVerify:
    def test_unit_square(self, square):
        cert = make_certificate((1, 1), (2, 1), (2, 2), (1, 2), square)
        ok, diags = verify_certificate(cert, square)
        assert ok and diags == []

    def test_vertex_outside(self, square):
        cert = make_certificate((9.5, 9.5), (10.5, 9.5), (10.5, 10.5), (9.5, 10.5), square)
        ok, diags = verify_certificate(cert, square)
        assert not ok
        assert all(line.startswith("membership") for line in diags)
        assert len(diags) == 3

    def test_wrong_area(self, square):
        cert = make_certificate((1, 1), (3, 1), (3, 2), (1, 2), square)
        ok, diags = verify_certificate(cert, square)
        assert not ok
        assert any(line.startswith("area") for line in diags)

    def test_not_concyclic(self, square):
        cert = make_certificate((1, 1), (2, 1), (2.2, 2), (1, 2), square, target_area=polygon_area([(1, 1), (2, 1), (2.2, 2), (1, 2)]))
        ok, diags = verify_certificate(cert, square)
        assert [d.split(":")[0] for d in diags] == ["concyclicity"]

    def test_clockwise(self, square):
        cert = make_certificate((1, 2), (2, 2), (2, 1), (1, 1), square, target_area=-1.0)
        ok, diags = verify_certificate(cert, square)
        assert any(line.startswith("convexity") for line in diags)


class TestSearch:
    def test_square(self, square, square_result):
        cert, trace = square_result
        check_quad(cert, square)
        ok, _ = verify_certificate(cert, square)
        assert ok
        assert trace.d_index is not None and trace.failure is None

    def test_target_area(self, square):
        cert, _ = find_unit_cyclic_quad(square, FinderConfig(target_area=4.0))
        check_quad(cert, square, 4.0)
        assert abs(cert.area - 4.0) <= 1e-8

    def test_deterministic(self, square, square_result):
        again = find_unit_cyclic_quad(square)
        assert again == square_result

    def test_replay(self, square, square_result):
        cert, trace = square_result
        assert replay_trace(square, trace) == cert

    def test_replay_needs_success(self, square):
        from unitpoly.finder import SearchTrace

        with pytest.raises(InputError):
            replay_trace(square, SearchTrace())

    def test_exhausted(self, square):
        with pytest.raises(ExhaustedCandidatesError) as info:
            find_unit_cyclic_quad(square, FinderConfig(max_d_candidates=0, max_anchors=3))
        assert info.value.trace.anchors_tried == 3

    def test_small_square_has_no_room(self):
        # the base lies on a slice of length 2t and the apex at most 2 - t above it
        reg = CellRegion.from_predicate(Rectangle((0, 0), (4, 4)), (0, 0, 4, 4), 0.05)
        with pytest.raises(AnchorNotFoundError):
            find_unit_cyclic_quad(reg)

    @pytest.mark.parametrize("s", [0.6, 2.0, 3.0])
    def test_scaling_covariance(self, s):
        base = CellRegion.from_predicate(Rectangle((0, 0), (8, 8)), (0, 0, 8, 8), 0.05)
        scaled = base.scaled(s)
        cert, _ = find_unit_cyclic_quad(scaled)
        shrunk = [p.scaled(1.0 / s) for p in cert.vertices]
        assert all(base.contains(p) for p in shrunk)
        assert polygon_area(shrunk) == pytest.approx(1.0 / (s * s), rel=1e-9)

    @settings(max_examples=10, deadline=None)
    @given(st.floats(5, 9), st.floats(5, 9), st.floats(-20, 20), st.floats(-20, 20))
    def test_rectangles(self, w, hgt, x0, y0):
        reg = CellRegion.from_predicate(Rectangle((x0, y0), (x0 + w, y0 + hgt)), (x0, y0, x0 + w, y0 + hgt), 0.05)
        cert, _ = find_unit_cyclic_quad(reg)
        check_quad(cert, reg)
