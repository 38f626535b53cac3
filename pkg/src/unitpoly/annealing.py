"""Simulated-annealing search for large equilateral convex polygons under 4xy = 1.

A polygon is encoded by its first vertex, the common side length and the
directions of its first n-2 sides.  The last two sides are then forced (they
must close a rhombus-like gap of fixed side length), so every decoded
candidate is equilateral up to rounding and only convexity and region
membership can fail.  Many chains run side by side as numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .hyperbola import EquilateralPolygon, validate_polygon

# consecutive rejections before a chain restarts from a fresh state
RESTART_AFTER = 1000
MAX_CHAINS = 64
# turning angles closer than this to 0 or pi are rejected as degenerate
MIN_TURN = 1e-9
FALLBACK_CENTER = (2.0, 0.05)
FALLBACK_RADIUS = 0.01


@dataclass(frozen=True)
class AnnealConfig:
    chains: int = MAX_CHAINS
    t_start: float = 0.3
    t_end: float = 1e-5
    restart_after: int = RESTART_AFTER


@dataclass
class SearchOutcome:
    """Best polygon for one vertex count, plus the bookkeeping of the run."""

    n: int
    best: EquilateralPolygon
    area: float
    chain_bests: List[EquilateralPolygon]
    proposals: int
    valid_candidates: int
    max_valid_area: float
    meets_obstacle_large_side: int = 0
    projection_violations: int = 0
    restarts: int = 0


# ----------------------------------------------------------------------------
# encoding: state columns are [x0, y0, log a, phi_1, gap_1 .. gap_{n-3}]


def _directions(state: np.ndarray, n: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Side directions (K, n), side length (K,) and a closure-feasibility mask."""
    a = np.exp(state[:, 2])
    free = np.cumsum(state[:, 3 : n + 1], axis=1)  # phi_1 .. phi_{n-2}
    ux, uy = np.cos(free), np.sin(free)
    vx, vy = ux.sum(axis=1), uy.sum(axis=1)
    vlen = np.hypot(vx, vy)
    ok = vlen < 2.0
    half_gap = np.arccos(np.clip(vlen / 2.0, 0.0, 1.0))
    last = free[:, -1]
    psi = last + np.mod(np.arctan2(-vy, -vx) - last, 2.0 * np.pi)
    dirs = np.concatenate([free, (psi - half_gap)[:, None], (psi + half_gap)[:, None]], axis=1)
    return dirs, a, ok


def decode(state: np.ndarray, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Vertices (K, n, 2) and a flag for convex, closable encodings."""
    dirs, a, ok = _directions(state, n)
    turns = np.diff(np.concatenate([dirs, dirs[:, :1] + 2.0 * np.pi], axis=1), axis=1)
    ok &= np.all((turns > MIN_TURN) & (turns < np.pi - MIN_TURN), axis=1)
    ex = a[:, None] * np.cos(dirs[:, :-1])
    ey = a[:, None] * np.sin(dirs[:, :-1])
    verts = np.empty(state.shape[:1] + (n, 2))
    verts[:, 0, 0] = state[:, 0]
    verts[:, 0, 1] = state[:, 1]
    verts[:, 1:, 0] = state[:, :1] + np.cumsum(ex, axis=1)
    verts[:, 1:, 1] = state[:, 1:2] + np.cumsum(ey, axis=1)
    return verts, ok


def in_region(verts: np.ndarray) -> np.ndarray:
    x, y = verts[..., 0], verts[..., 1]
    return np.all((x > 1.0) & (y > 0.0) & (4.0 * x * y < 1.0), axis=-1)


def shoelace(verts: np.ndarray) -> np.ndarray:
    d = verts - verts[:, :1, :]
    return 0.5 * np.sum(d[:, 1:-1, 0] * d[:, 2:, 1] - d[:, 1:-1, 1] * d[:, 2:, 0], axis=1)


def fallback_state(n: int, k: int = 1) -> np.ndarray:
    """Encoding of a small regular n-gon around ``FALLBACK_CENTER``."""
    side = 2.0 * FALLBACK_RADIUS * math.sin(math.pi / n)
    ext = 2.0 * math.pi / n
    cx, cy = FALLBACK_CENTER
    x0 = cx + FALLBACK_RADIUS * math.cos(-math.pi / 2 - ext / 2)
    y0 = cy + FALLBACK_RADIUS * math.sin(-math.pi / 2 - ext / 2)
    row = [x0, y0, math.log(side), 0.0] + [ext] * (n - 3)
    return np.tile(np.array(row), (k, 1))


def _random_states(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    x0 = 1.0 + rng.exponential(1.5, k)
    y0 = rng.uniform(0.0, 1.0, k) / (4.0 * x0)
    log_a = rng.uniform(math.log(1e-3), math.log(2.0), k)
    phi = rng.uniform(-math.pi, math.pi, k)
    gaps = rng.dirichlet(np.ones(n - 1), k)[:, : n - 3] * 2.0 * math.pi
    return np.column_stack([x0, y0, log_a, phi, gaps])


def _projection_stats(verts: np.ndarray, a: np.ndarray) -> Tuple[int, int]:
    """Count large-side candidates meeting the obstacle and those breaking 7a/8."""
    big = a >= 2.0
    if not big.any():
        return 0, 0
    v = verts[big]
    p, q = v, np.roll(v, -1, axis=1)
    dx, dy = q[..., 0] - p[..., 0], q[..., 1] - p[..., 1]
    qa = 4.0 * dx * dy
    qb = 4.0 * (p[..., 0] * dy + p[..., 1] * dx)
    qc = 4.0 * p[..., 0] * p[..., 1] - 1.0
    disc = qb * qb - 4.0 * qa * qc
    with np.errstate(divide="ignore", invalid="ignore"):
        s_top = -qb / (2.0 * qa)
    hits = (qa < 0) & (disc >= 0) & (s_top >= 0) & (s_top <= 1)
    meets = hits.any(axis=1)
    ext = np.abs(dx).min(axis=1)
    bad = meets & (ext < 7.0 * a[big] / 8.0 - 1e-9)
    return int(meets.sum()), int(bad.sum())


def _to_polygon(row: np.ndarray) -> EquilateralPolygon:
    return validate_polygon([(float(x), float(y)) for x, y in row])


def _polygon_key(poly: EquilateralPolygon) -> Tuple:
    return (-poly.area, tuple(poly.vertices.vertices))


def anneal_n(n: int, iterations: int, seed: int, cfg: AnnealConfig = AnnealConfig()) -> SearchOutcome:
    """Anneal equilateral n-gons; ``iterations`` counts every evaluated candidate."""
    if n < 3:
        raise ValueError("n must be at least 3")
    if iterations < 1:
        raise ValueError("iterations must be positive")
    rng = np.random.default_rng(np.random.SeedSequence([seed, n]))
    k = min(cfg.chains, iterations)
    steps = -(-iterations // k) - 1
    dim = n + 1

    state = _random_states(rng, n, k)
    verts, ok = decode(state, n)
    ok &= in_region(verts)
    fb = fallback_state(n, k)
    state = np.where(ok[:, None], state, fb)
    verts, _ = decode(state, n)
    energy = shoelace(verts)
    best_state, best_area = state.copy(), energy.copy()
    valid = k
    max_valid = float(energy.max())
    big, viol = _projection_stats(verts, np.exp(state[:, 2]))
    rejections = np.zeros(k, dtype=np.int64)
    restarts = 0
    evaluated = k
    scales = np.concatenate([[0.05, 0.2, 0.1, 0.3], np.full(n - 3, 0.3)])
    gain = np.ones(k)
    rows = np.arange(k)
    for step in range(steps):
        remaining = iterations - evaluated
        if remaining <= 0:
            break
        active = rows < remaining
        frac = step / max(steps - 1, 1)
        temp = cfg.t_start * (cfg.t_end / cfg.t_start) ** frac
        # one coordinate per move, or occasionally all of them; x0 moves are
        # relative to x0 and y0 moves to the headroom under the hyperbola
        unit = scales * np.ones((k, 1))
        unit[:, 0] *= state[:, 0]
        unit[:, 1] *= 1.0 / (4.0 * state[:, 0])
        mask = np.zeros((k, dim), dtype=bool)
        mask[rows, rng.integers(0, dim, k)] = True
        mask |= (rng.random(k) < 0.25)[:, None]
        noise = rng.standard_normal((k, dim)) * unit * gain[:, None]
        prop = state + np.where(mask, noise / np.sqrt(mask.sum(axis=1))[:, None], 0.0)
        pv, pok = decode(prop, n)
        pok &= in_region(pv) & active
        parea = np.where(pok, shoelace(pv), -np.inf)
        evaluated += int(active.sum())
        valid += int(pok.sum())
        if pok.any():
            max_valid = max(max_valid, float(parea[pok].max()))
            b, v = _projection_stats(pv[pok], np.exp(prop[pok, 2]))
            big += b
            viol += v
        u = rng.random(k)
        # temperature is relative to the current area, which spans many decades
        delta = (parea - energy) / np.maximum(energy, 1e-300)
        with np.errstate(over="ignore", invalid="ignore"):
            accept = pok & ((delta >= 0) | (u < np.exp(np.minimum(delta, 0.0) / temp)))
        gain = np.clip(np.where(accept, gain * 1.3, np.where(active, gain * 0.9, gain)), 1e-6, 10.0)
        state[accept] = prop[accept]
        energy[accept] = parea[accept]
        improved = accept & (energy > best_area)
        best_state[improved] = state[improved]
        best_area[improved] = energy[improved]
        rejections = np.where(accept, 0, rejections + active)
        stale = rejections >= cfg.restart_after
        if stale.any():
            restarts += int(stale.sum())
            fresh = _random_states(rng, n, int(stale.sum()))
            fv, fok = decode(fresh, n)
            fok &= in_region(fv)
            fresh = np.where(fok[:, None], fresh, fallback_state(n, len(fresh)))
            state[stale] = fresh
            energy[stale] = shoelace(decode(fresh, n)[0])
            rejections[stale] = 0
            gain[stale] = 1.0

    chain_bests = [_to_polygon(row) for row in decode(best_state, n)[0]]
    top = min(chain_bests, key=_polygon_key)
    return SearchOutcome(
        n=n,
        best=top,
        area=top.area,
        chain_bests=chain_bests,
        proposals=evaluated,
        valid_candidates=valid,
        max_valid_area=max_valid,
        meets_obstacle_large_side=big,
        projection_violations=viol,
        restarts=restarts,
    )


def search_max_area(n_min: int, n_max: int, iterations: int, seed: int, cfg: AnnealConfig = AnnealConfig()) -> Dict[int, SearchOutcome]:
    """Run :func:`anneal_n` for every vertex count in ``[n_min, n_max]``."""
    if not 3 <= n_min <= n_max:
        raise ValueError(f"need 3 <= n_min <= n_max, got {n_min}, {n_max}")
    return {n: anneal_n(n, iterations, seed, cfg) for n in range(n_min, n_max + 1)}


def overall_best(outcomes: Dict[int, SearchOutcome]) -> SearchOutcome:
    return min(outcomes.values(), key=lambda o: _polygon_key(o.best))
