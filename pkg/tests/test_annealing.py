import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unitpoly.annealing import (
    AnnealConfig,
    _random_states,
    anneal_n,
    decode,
    fallback_state,
    in_region,
    overall_best,
    search_max_area,
    shoelace,
)
from unitpoly.geometry import distance, is_convex_ccw, polygon_area
from unitpoly.hyperbola import certify_area_bound, region_contains, validate_polygon


@pytest.fixture(scope="module")
def short_run():
    return search_max_area(3, 8, 4000, seed=5)


class TestEncoding:
    @pytest.mark.parametrize("n", range(3, 13))
    def test_fallback_is_a_small_regular_polygon(self, n):
        verts, ok = decode(fallback_state(n), n)
        assert ok[0] and in_region(verts)[0]
        poly = validate_polygon([tuple(p) for p in verts[0]])
        assert poly.n == n
        centre = verts[0].mean(axis=0)
        assert distance(centre, (2.0, 0.05)) <= 1e-12
        assert shoelace(verts)[0] == pytest.approx(polygon_area(poly.vertices), rel=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(3, 12), st.integers(0, 2**32 - 1))
    def test_decoded_polygons_close_with_equal_sides(self, n, seed):
        rng = np.random.default_rng(seed)
        states = _random_states(rng, n, 32)
        verts, ok = decode(states, n)
        a = np.exp(states[:, 2])
        for v, good, side in zip(verts, ok, a):
            if not good:
                continue
            sides = [distance(v[k], v[(k + 1) % n]) for k in range(n)]
            assert max(abs(s - side) for s in sides) <= 1e-9 * side
            assert is_convex_ccw([tuple(p) for p in v])

    def test_region_mask_is_strict(self):
        verts = np.array([[[2.0, 0.125], [3.0, 0.01], [2.5, 0.05]]])
        assert not in_region(verts)[0]


class TestSearch:
    def test_deterministic(self):
        a = anneal_n(5, 3000, seed=9)
        b = anneal_n(5, 3000, seed=9)
        assert a.best.vertices == b.best.vertices
        assert a.area == b.area
        assert [p.vertices for p in a.chain_bests] == [p.vertices for p in b.chain_bests]

    def test_seed_matters(self):
        assert anneal_n(5, 3000, seed=1).best.vertices != anneal_n(5, 3000, seed=2).best.vertices

    def test_counts_every_candidate(self):
        out = anneal_n(4, 1000, seed=0)
        assert out.proposals == 1000
        assert 0 < out.valid_candidates <= 1000

    def test_fallback_on_infeasible_start(self):
        n = 6
        for seed in range(1000):
            rng = np.random.default_rng(np.random.SeedSequence([seed, n]))
            verts, ok = decode(_random_states(rng, n, 1), n)
            if not (ok & in_region(verts))[0]:
                break
        else:
            pytest.skip("every start was feasible")
        out = anneal_n(n, 1, seed)
        fb = decode(fallback_state(n), n)[0][0]
        assert out.proposals == 1
        assert np.allclose(np.array(out.best.vertices.vertices), fb, rtol=0, atol=0)
        assert all(region_contains(p) for p in out.best.vertices)

    def test_invalid_ranges(self):
        with pytest.raises(ValueError):
            search_max_area(2, 5, 10, 0)
        with pytest.raises(ValueError):
            search_max_area(6, 5, 10, 0)
        with pytest.raises(ValueError):
            anneal_n(4, 0, 0)

    def test_results_stay_below_one(self, short_run):
        for n, out in short_run.items():
            assert out.best.n == n
            assert out.area < 1
            assert out.max_valid_area < 1
            assert out.area == max(p.area for p in out.chain_bests)
            for poly in out.chain_bests:
                cert = certify_area_bound(poly)
                assert cert.area <= cert.certified_area_bound < 1
                if cert.branch == "disjoint-tangent-bound":
                    assert cert.area <= 0.5

    def test_outputs_are_valid_polygons(self, short_run):
        for out in short_run.values():
            again = validate_polygon(out.best.vertices)
            assert again.side == pytest.approx(out.best.side, rel=1e-12)

    def test_overall_best(self, short_run):
        top = overall_best(short_run)
        assert top.area == max(o.area for o in short_run.values())

    def test_restarts_happen(self):
        out = anneal_n(3, 20000, seed=0, cfg=AnnealConfig(chains=2, restart_after=5))
        assert out.restarts > 0
        assert out.area < 1
