import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unitpoly.errors import EmptyRegionError, InputError, UnrealizableDistanceError
from unitpoly.regions import (
    CellRegion,
    Disk,
    HalfPlane,
    HyperbolaRegionPredicate,
    Intersection,
    QuadrantAxes,
    Rectangle,
    SliceAnalysis,
    Union,
    admissible_starts,
    difference_gap,
    disk_rect_area,
    local_density,
    merge_intervals,
    positive_differences,
    pair_at_distance,
    quadrant_measures,
    quadrant_select,
    slice_at,
)

ORIGIN = QuadrantAxes((0.0, 0.0))

cell_lists = st.lists(st.tuples(st.integers(-30, 30), st.integers(-30, 30)), min_size=1, max_size=60)


def square(n=100, h=0.1):
    return CellRegion(h, [(i, j) for i in range(n) for j in range(n)])


class TestCellRegion:
    def test_measure_is_exact(self):
        reg = CellRegion(0.5, [(0, 0), (1, 0), (1, 0), (3, 4)])
        assert len(reg) == 3
        assert reg.measure == 3 * 0.25

    def test_closed_cells(self):
        reg = CellRegion(1.0, [(0, 0)])
        for p in [(0, 0), (1, 1), (0.5, 1.0), (1.0, 0.3)]:
            assert reg.contains(p)
        assert not reg.contains((1.0000001, 0.5))
        assert not reg.contains((-1e-12, 0.5))

    def test_shared_edge_with_neighbour(self):
        reg = CellRegion(0.1, [(3, 0)])
        # cell edges are m * h as computed in floating point
        assert reg.contains((3 * 0.1, 0.05))
        assert reg.contains((4 * 0.1, 0.05))
        assert not reg.contains((math.nextafter(3 * 0.1, 0), 0.05))

    def test_contains_many_matches_scalar(self):
        rng = np.random.default_rng(3)
        reg = CellRegion(0.25, [(i, j) for i in range(-4, 4) for j in range(-4, 4) if (i + j) % 3])
        xs, ys = rng.uniform(-1.2, 1.2, 500), rng.uniform(-1.2, 1.2, 500)
        fast = reg.contains_many(xs, ys)
        slow = [reg.contains((x, y)) for x, y in zip(xs, ys)]
        assert list(fast) == slow

    def test_invalid_resolution(self):
        with pytest.raises(InputError):
            CellRegion(0.0, [(0, 0)])
        with pytest.raises(InputError):
            CellRegion(float("nan"), [(0, 0)])

    def test_empty_bbox(self):
        with pytest.raises(EmptyRegionError):
            CellRegion(1.0, []).bbox()

    def test_from_predicate_records_generator(self):
        reg = CellRegion.from_predicate(Rectangle((0, 0), (1, 1)), (0, 0, 1, 1), 0.25)
        assert len(reg) == 16
        assert reg.generator == {"predicate": {"kind": "rectangle", "min": [0, 0], "max": [1, 1]}, "window": [0.0, 0.0, 1.0, 1.0]}

    def test_predicates(self):
        x = np.array([0.0, 2.0, 1.5])
        y = np.array([0.0, 0.1, 0.3])
        assert list(Disk((0, 0), 1)(x, y)) == [True, False, False]
        assert list(HalfPlane((1, 0), 1.0)(x, y)) == [True, False, False]
        assert list(HyperbolaRegionPredicate()(x, y)) == [False, True, False]
        u = Union((Disk((0, 0), 1), HyperbolaRegionPredicate()))
        i = Intersection((Disk((0, 0), 1), HyperbolaRegionPredicate()))
        assert list(u(x, y)) == [True, True, False]
        assert list(i(x, y)) == [False, False, False]

    def test_scaling(self):
        reg = square(10, 0.1).scaled(2.0)
        assert reg.h == pytest.approx(0.2)
        assert reg.measure == pytest.approx(4.0)
        assert reg.contains((1.99, 1.99))

    def test_row_and_column_intervals(self):
        reg = CellRegion(1.0, [(0, 0), (1, 0), (3, 0), (3, 1)])
        assert reg.row_intervals(0) == [(0.0, 2.0), (3.0, 4.0)]
        assert reg.col_intervals(3) == [(0.0, 2.0)]


class TestQuadrants:
    def test_cell_above_origin(self):
        reg = CellRegion(1.0, [(0, 100)])
        assert quadrant_select(reg, ORIGIN).index == 1

    def test_symmetric_tie_goes_to_first(self):
        reg = CellRegion(1.0, [(-1, 5), (-6, -1), (-1, -6), (5, -1)])
        choice = quadrant_select(reg, ORIGIN)
        assert choice.measures == pytest.approx((1.0, 1.0, 1.0, 1.0))
        assert choice.index == 1
        assert choice.ranking == [1, 2, 3, 4]

    def test_left_sector(self):
        reg = CellRegion(1.0, [(-10, 0), (-11, -1), (-9, 2)])
        choice = quadrant_select(reg, ORIGIN)
        assert choice.index == 2
        assert choice.measures[0] == choice.measures[2] == choice.measures[3] == 0.0

    def test_empty(self):
        with pytest.raises(EmptyRegionError):
            quadrant_select(CellRegion(1.0, []))

    def test_only_diagonal_axes(self):
        with pytest.raises(InputError):
            QuadrantAxes((0, 0), (1, 0))

    @settings(max_examples=100, deadline=None)
    @given(cell_lists, st.integers(-20, 20), st.integers(-20, 20))
    def test_measures_add_up(self, cells, ox, oy):
        reg = CellRegion(0.5, cells)
        meas = quadrant_measures(reg, QuadrantAxes((ox * 0.25, oy * 0.25)))
        assert sum(meas) == pytest.approx(reg.measure, rel=1e-9)
        assert min(meas) >= 0


class TestSlices:
    def test_full_square_middle(self):
        reg = square()
        axes = QuadrantAxes((5.0, 5.0))
        slc = slice_at(reg, 2.0, axes, 1)
        assert slc.intervals == ((-2.0, 2.0),)
        assert slc.total_length == pytest.approx(4.0)

    def test_empty_row(self):
        reg = CellRegion(1.0, [(0, 0)])
        assert slice_at(reg, 5.5, ORIGIN, 1).total_length == 0
        assert slice_at(reg, 5.5, ORIGIN, 1).intervals == ()

    def test_two_cells_in_a_row(self):
        h = 0.5
        reg = CellRegion(h, [(-2, 4), (1, 4)])
        slc = slice_at(reg, 2.25, ORIGIN, 1)
        assert len(slc.intervals) == 2
        assert slc.total_length == pytest.approx(2 * h)

    def test_negative_height(self):
        with pytest.raises(InputError):
            slice_at(square(), -1.0)

    @pytest.mark.parametrize("quadrant", [1, 2, 3, 4])
    def test_fubini(self, quadrant):
        h = 0.05
        reg = CellRegion.from_predicate(Disk((0.3, -0.2), 3.0), (-4, -4, 4, 4), h)
        axes = QuadrantAxes((0.0, 0.0))
        ts = np.linspace(0, 4, 4001)
        lengths = [slice_at(reg, float(t), axes, quadrant).total_length for t in ts]
        lengths = np.array(lengths)
        integral = float(np.sum((lengths[1:] + lengths[:-1]) * np.diff(ts)) / 2)
        expected = quadrant_measures(reg, axes)[quadrant - 1]
        perimeter = 2 * math.pi * 3.0
        assert abs(integral - expected) <= 2 * h * perimeter


class TestDifferenceSets:
    def test_merge(self):
        assert merge_intervals([(2, 3), (0, 1), (0.5, 2)]) == [(0, 3)]

    def test_positive_differences(self):
        diffs = positive_differences([(0, 0.1), (0.9, 1.0)])
        np.testing.assert_allclose(diffs, [(0.0, 0.1), (0.8, 1.0)], atol=1e-15)
        assert difference_gap([(0, 0.1), (0.9, 1.0)]) == pytest.approx(0.1)

    @given(st.lists(st.tuples(st.floats(-10, 10), st.floats(0, 3)), min_size=1, max_size=6))
    def test_gap_at_least_shortest_interval(self, raw):
        ivs = merge_intervals([(a, a + w) for a, w in raw])
        gap = difference_gap(ivs)
        assert gap >= min(b - a for a, b in ivs) - 1e-12

    def test_admissible_starts(self):
        np.testing.assert_allclose(admissible_starts([(0, 0.1), (0.9, 1.0)], 0.85), [(0.05, 0.1)], atol=1e-15)


class TestPairAtDistance:
    def test_leftmost_placement(self):
        slc = SliceAnalysis.from_intervals(0.7, [(-1.0, 1.0)])
        A, B = pair_at_distance(slc, 0.5)
        assert A == (-1.0, 0.7) and B == (-0.5, 0.7)

    def test_across_a_gap(self):
        slc = SliceAnalysis.from_intervals(0.0, [(0.0, 0.1), (0.9, 1.0)])
        A, B = pair_at_distance(slc, 0.85)
        assert A.x == pytest.approx(0.05, abs=1e-15)
        assert B.x == 0.9

    def test_unrealizable(self):
        slc = SliceAnalysis.from_intervals(0.0, [(0.0, 0.1)])
        with pytest.raises(UnrealizableDistanceError):
            pair_at_distance(slc, 5.0)

    def test_nonpositive_distance(self):
        slc = SliceAnalysis.from_intervals(0.0, [(0.0, 1.0)])
        with pytest.raises(InputError):
            pair_at_distance(slc, 0.0)

    @settings(max_examples=100, deadline=None)
    @given(cell_lists, st.integers(1, 60), st.floats(0.01, 20), st.integers(1, 4))
    def test_pairs_have_exact_distance_and_stay_inside(self, cells, row, c, quadrant):
        reg = CellRegion(0.5, cells)
        slc = slice_at(reg, row * 0.5 + 0.25, ORIGIN, quadrant)
        try:
            A, B = pair_at_distance(slc, c)
        except UnrealizableDistanceError:
            assert all(not (lo <= c <= hi) for lo, hi in positive_differences(slc.intervals))
            return
        assert B.x - A.x == pytest.approx(c, abs=1e-12 * max(1.0, abs(A.x) + c))
        for p in (A, B):
            assert reg.contains(slc.frame.to_world(p))


class TestDensity:
    def test_interior(self):
        assert local_density(square(), (5.0, 5.0), 0.5) == pytest.approx(1.0)

    def test_straight_edge(self):
        reg = square()
        assert local_density(reg, (0.0, 5.0), 0.5) == pytest.approx(0.5, abs=1e-3)
        assert local_density(reg, (5.0, 10.0), 0.5, half="lower") == pytest.approx(1.0, abs=1e-12)

    def test_corner(self):
        assert local_density(square(), (10.0, 10.0), 0.5) == pytest.approx(0.25, abs=1e-12)

    def test_empty(self):
        assert local_density(CellRegion(0.1, []), (0, 0), 1.0) == 0.0

    def test_bad_arguments(self):
        with pytest.raises(InputError):
            local_density(square(), (0, 0), 0.0)
        with pytest.raises(InputError):
            local_density(square(), (0, 0), 1.0, half="upper")

    def test_sampled_path_agrees(self):
        reg = CellRegion.from_predicate(HalfPlane((1.0, 0.0), 0.0), (-2, -2, 2, 2), 0.001)
        # about 3e6 cells in the box, beyond the exact-clipping limit
        assert local_density(reg, (0.0, 0.0), 1.0) == pytest.approx(0.5, abs=1e-3)

    @settings(max_examples=100, deadline=None)
    @given(cell_lists, cell_lists, st.floats(-10, 10), st.floats(-10, 10), st.floats(0.1, 10))
    def test_monotone_under_superset(self, a, b, cx, cy, eps):
        small = CellRegion(0.5, a)
        big = CellRegion(0.5, a + b)
        for half in ("full", "lower"):
            assert local_density(big, (cx, cy), eps, half) >= local_density(small, (cx, cy), eps, half) - 1e-12

    @given(st.floats(-2, 2), st.floats(-2, 2), st.floats(0.01, 2), st.floats(0.01, 2), st.floats(0.1, 2))
    def test_disk_rect_area_against_integration(self, x0, y0, w, hgt, r):
        x1, y1 = x0 + w, y0 + hgt
        got = float(disk_rect_area(np.array([x0]), np.array([y0]), np.array([x1]), np.array([y1]), r)[0])
        # integrate the chord length of the disk inside [y0, y1] over x
        xs = np.linspace(max(x0, -r), min(x1, r), 20001)
        half = np.sqrt(np.maximum(r * r - xs * xs, 0.0))
        chord = np.clip(np.minimum(half, y1) - np.maximum(-half, y0), 0.0, None)
        ref = float(np.sum((chord[1:] + chord[:-1]) * np.diff(xs)) / 2) if xs.size > 1 else 0.0
        assert got == pytest.approx(ref, abs=1e-6)
