"""Constructive search for unit-area cyclic quadrilaterals inside a raster set.

Pipeline:

1. pick the quadrant with the most mass, then slices of it by decreasing
   length;
2. pick C above the slice with high lower-half density and a chord length
   ``c = 2 / dist(C, slice)`` realised by two slice points A, B, so that ABC
   has area 1 and well-bounded base angles;
3. sweep D over a lattice of the lower half-disk at C, nearest first, and
   accept the first D whose partner E = f(D) also lies in the region.

Every accepted quadrilateral is re-verified in world coordinates before it is
returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    AnchorNotFoundError,
    ExhaustedCandidatesError,
    InputError,
    NoSliceError,
    NotFoundError,
    OutOfDomainError,
    UnrealizableDistanceError,
)
from .geometry import (
    PlanarPoint,
    RigidMotion,
    circumcircle,
    concyclicity_residual,
    distance,
    is_convex_ccw,
    polygon_area,
)
from .perturbation import AnchorTriangle, SolverConfig, solve_partner
from .regions import (
    CellRegion,
    QuadrantAxes,
    default_axes,
    local_density,
    positive_differences,
    quadrant_select,
    slice_at,
    slice_profile,
    pair_at_distance,
)

# side of the area-1 equilateral triangle over its height; used to rank C
_EQ_HEIGHT = math.sqrt(math.sqrt(3.0))


@dataclass(frozen=True)
class AnchorSearchConfig:
    angle_margin: float = 30.0
    density_threshold: float = 0.99
    density_radius: Optional[float] = None  # None: h / 2
    axes: Optional[QuadrantAxes] = None  # None: diagonals through the bbox centre
    slice_retries: int = 64
    candidates_per_slice: int = 400
    all_quadrants: bool = True

    def __post_init__(self):
        if not 0 < self.angle_margin < 90:
            raise InputError(f"angle_margin must lie in (0, 90), got {self.angle_margin!r}")
        if not 0 <= self.density_threshold <= 1:
            raise InputError(f"density_threshold must lie in [0, 1], got {self.density_threshold!r}")
        if self.density_radius is not None and not self.density_radius > 0:
            raise InputError("density_radius must be positive")


@dataclass(frozen=True)
class FinderConfig:
    anchor: AnchorSearchConfig = AnchorSearchConfig()
    solver: SolverConfig = SolverConfig()
    target_area: float = 1.0
    sweep_levels: int = 6
    max_anchors: int = 25
    max_d_candidates: Optional[int] = None  # per anchor
    certificate_tolerance: float = 1e-9

    def __post_init__(self):
        if not self.target_area > 0:
            raise InputError(f"target_area must be positive, got {self.target_area!r}")


@dataclass(frozen=True)
class AnchorResult:
    triangle: AnchorTriangle
    frame: RigidMotion  # anchor frame: local = R (world - A)
    A: PlanarPoint
    B: PlanarPoint
    C: PlanarPoint
    quadrant: int
    t: float
    density: float


@dataclass(frozen=True)
class QuadCertificate:
    A: PlanarPoint
    B: PlanarPoint
    E: PlanarPoint
    D: PlanarPoint
    circumcenter: PlanarPoint
    radius: float
    area: float
    area_residual: float
    concyclicity: float
    membership: Tuple[bool, bool, bool, bool]
    target_area: float = 1.0

    @property
    def vertices(self) -> Tuple[PlanarPoint, PlanarPoint, PlanarPoint, PlanarPoint]:
        return (self.A, self.B, self.E, self.D)


@dataclass
class SearchTrace:
    quadrant: Optional[int] = None
    t: Optional[float] = None
    c: Optional[float] = None
    anchor: Optional[dict] = None
    anchors_tried: int = 0
    d_candidates_tried: int = 0
    d_index: Optional[int] = None
    scale: float = 1.0
    failure: Optional[str] = None


def make_certificate(A, B, E, D, region: CellRegion, target_area: float = 1.0) -> QuadCertificate:
    verts = [PlanarPoint(*p) for p in (A, B, E, D)]
    circ = circumcircle(verts[0], verts[1], verts[2])
    area = polygon_area(verts)
    return QuadCertificate(
        *verts,
        circumcenter=circ.center,
        radius=circ.radius,
        area=area,
        area_residual=abs(area - target_area),
        concyclicity=concyclicity_residual(*verts),
        membership=tuple(region.contains(p) for p in verts),
        target_area=target_area,
    )


def verify_certificate(cert: QuadCertificate, region: CellRegion, tol: float = 1e-9) -> Tuple[bool, List[str]]:
    """Recompute every claim of the certificate from its four vertices.

    Returns ``(ok, diagnostics)``; each failed check contributes one
    diagnostic line starting with the name of the check.
    """
    diags: List[str] = []
    verts = cert.vertices
    names = "ABED"
    for k in range(4):
        for m in range(k + 1, 4):
            if verts[k] == verts[m]:
                diags.append(f"distinct: vertices {names[k]} and {names[m]} coincide")
    try:
        convex = is_convex_ccw(verts)
    except Exception as exc:  # degenerate vertex lists
        convex = False
        diags.append(f"convexity: {exc}")
    if not convex:
        diags.append("convexity: A, B, E, D is not a strictly convex counterclockwise quadrilateral")
    try:
        conc = concyclicity_residual(*verts)
        if not conc <= tol:
            diags.append(f"concyclicity: residual {conc:.3e} exceeds {tol:g}")
    except Exception as exc:
        diags.append(f"concyclicity: {exc}")
    area = polygon_area(verts)
    if not abs(area - cert.target_area) <= tol:
        diags.append(f"area: {area!r} differs from target {cert.target_area!r} by {abs(area - cert.target_area):.3e}")
    if not abs(cert.area - area) <= tol:
        diags.append(f"area: stored area {cert.area!r} disagrees with recomputed {area!r}")
    if not abs(cert.area_residual - abs(area - cert.target_area)) <= tol:
        diags.append(f"area: stored residual {cert.area_residual!r} disagrees with recomputed value")
    for name, p in zip(names, verts):
        if not region.contains(p):
            diags.append(f"membership: vertex {name} = ({p.x!r}, {p.y!r}) is not in the region")
    return (not diags), diags


# ---------------------------------------------------------------------------
# anchor triangles


@dataclass
class _AnchorStats:
    best_density: float = 0.0
    slices_seen: int = 0


def iter_anchor_triangles(region: CellRegion, cfg: AnchorSearchConfig = AnchorSearchConfig(), stats: Optional[_AnchorStats] = None) -> Iterator[AnchorResult]:
    """Admissible anchor triangles in a deterministic order.

    The order does not depend on ``density_threshold``; the threshold only
    filters.
    """
    if stats is None:
        stats = _AnchorStats()
    if not len(region):
        raise NoSliceError("the region is empty: no slice has positive length")
    h = region.h
    axes = cfg.axes or default_axes(region)
    eps = cfg.density_radius if cfg.density_radius is not None else 0.5 * h
    choice = quadrant_select(region, axes)
    quadrants = choice.ranking if cfg.all_quadrants else [choice.index]
    cells = region.cells
    cx = (cells[:, 0] + 0.5) * h
    cy = (cells[:, 1] + 0.5) * h
    ox, oy = axes.origin
    tan_m = math.tan(math.radians(cfg.angle_margin))
    any_slice = False
    for k in quadrants:
        frame = axes.frame(k)
        heights, lengths = slice_profile(region, axes, k)
        if not heights.size:
            continue
        any_slice = True
        lx = frame.cos * (cx - ox) - frame.sin * (cy - oy)
        ly = frame.sin * (cx - ox) + frame.cos * (cy - oy)
        # the base stays in the sector; the apex may be any region point above it
        upper = ly > 0
        sx, sy = lx[upper], ly[upper]
        if not sy.size:
            continue
        # a slice is only worth trying if some cell sits high enough above it
        # slices with room for a near-equilateral triangle come first
        room = sy.max() - heights
        ranked = np.lexsort((heights, -lengths))
        order = [i for i in ranked if room[i] >= _EQ_HEIGHT]
        order += [i for i in ranked if math.sqrt(tan_m) < room[i] < _EQ_HEIGHT]
        for idx in order[: cfg.slice_retries]:
            t = float(heights[idx])
            slc = slice_at(region, t, axes, k)
            if not slc.total_length > 0:
                continue
            stats.slices_seen += 1
            diffs = positive_differences(slc.intervals)
            if not diffs:
                continue
            dlo = np.array([a for a, _ in diffs])
            dhi = np.array([b for _, b in diffs])
            d = sy - t
            above = d > 0
            # midpoint placement needs d^2 > tan(margin) for both base angles
            above &= d * d > tan_m
            cand_x, cand_d = sx[above], d[above]
            chord = 2.0 / cand_d
            pos = np.searchsorted(dlo, chord, side="right") - 1
            ok = (pos >= 0) & (chord <= dhi[np.maximum(pos, 0)])
            cand_x, cand_d = cand_x[ok], cand_d[ok]
            if not cand_x.size:
                continue
            score = np.abs(np.log(cand_d / _EQ_HEIGHT)) + np.abs(cand_x) / (t + cand_d)
            pick = np.lexsort((cand_x, cand_d, score))[: cfg.candidates_per_slice]
            for p in pick:
                res = _try_anchor(region, slc, frame, float(cand_x[p]), float(cand_d[p]) + t, t, k, eps, cfg, stats)
                if res is not None:
                    yield res
    if not any_slice:
        raise NoSliceError("no slice of any quadrant has positive length")


def _try_anchor(region, slc, frame: RigidMotion, x_c: float, y_c: float, t: float, quadrant: int, eps: float, cfg: AnchorSearchConfig, stats: _AnchorStats) -> Optional[AnchorResult]:
    chord = 2.0 / (y_c - t)
    try:
        A_f, B_f = pair_at_distance(slc, chord, near=x_c - 0.5 * chord, margin=1e-3 * region.h)
    except UnrealizableDistanceError:
        return None
    A_w = frame.to_world(A_f)
    B_w = frame.to_world(B_f)
    anchor_frame = RigidMotion(A_w, frame.cos, frame.sin)
    B_loc = anchor_frame.to_local(B_w)
    c = B_loc.x
    if not (c > 0 and B_loc.y == 0.0):
        return None
    C_guess = anchor_frame.to_local(frame.to_world((x_c, y_c)))
    try:
        tri = AnchorTriangle(c, C_guess.x, 2.0 / c, cfg.angle_margin)
    except OutOfDomainError:
        return None
    C_w = anchor_frame.to_world(tri.C)
    if not (region.contains(A_w) and region.contains(B_w) and region.contains(C_w)):
        return None
    up = anchor_frame.direction_to_world((0.0, 1.0))
    dens = local_density(region, C_w, eps, "lower", up=up)
    stats.best_density = max(stats.best_density, dens)
    if dens < cfg.density_threshold:
        return None
    return AnchorResult(tri, anchor_frame, A_w, B_w, C_w, quadrant, t, dens)


def find_anchor_triangle(region: CellRegion, cfg: AnchorSearchConfig = AnchorSearchConfig()) -> AnchorResult:
    stats = _AnchorStats()
    for res in iter_anchor_triangles(region, cfg, stats):
        return res
    raise AnchorNotFoundError(
        f"no anchor triangle with lower-half density >= {cfg.density_threshold:g} found in the window "
        f"(best density seen {stats.best_density:.4f} over {stats.slices_seen} slices)",
        best_density=stats.best_density,
    )


# ---------------------------------------------------------------------------
# D sweep


def sweep_offsets(rho: float, levels: int = 6) -> List[Tuple[float, float]]:
    """Lattice points of the open lower half-disk of radius rho about the origin.

    Level k uses spacing ``rho / 2**k``; each level contributes its new points
    nearest first (ties: smaller x, then larger y).
    """
    seen = set()
    out: List[Tuple[float, float]] = []
    finest = 1 << levels
    for k in range(levels + 1):
        n = 1 << k
        unit = finest // n
        step = rho / n
        level = []
        for m in range(-n, n + 1):
            for q in range(1, n + 1):
                if m * m + q * q < n * n:
                    key = (m * unit, q * unit)
                    if key not in seen:
                        seen.add(key)
                        level.append((m * m + q * q, m, q))
        level.sort(key=lambda v: (v[0], v[1], v[2]))
        out.extend((m * step, -q * step) for _, m, q in level)
    return out


def _partner_search(region: CellRegion, anchor: AnchorResult, cfg: FinderConfig, verify_region: CellRegion, unscale: float, trace: SearchTrace) -> Optional[QuadCertificate]:
    tri = anchor.triangle
    rho = cfg.solver.radius_for(tri)
    eps = cfg.anchor.density_radius if cfg.anchor.density_radius is not None else 0.5 * region.h
    rho = min(rho, eps)
    solver = replace(cfg.solver, rho=rho, frame=anchor.frame)
    offsets = sweep_offsets(rho, cfg.sweep_levels)
    if cfg.max_d_candidates is not None:
        offsets = offsets[: cfg.max_d_candidates]
    for idx, (dx, dy) in enumerate(offsets):
        trace.d_candidates_tried += 1
        cert = _candidate(region, anchor, solver, idx, dx, dy, cfg, verify_region, unscale)
        if cert is not None:
            trace.d_index = idx
            return cert
    return None


def _candidate(region, anchor: AnchorResult, solver: SolverConfig, idx, dx, dy, cfg: FinderConfig, verify_region, unscale) -> Optional[QuadCertificate]:
    tri = anchor.triangle
    D = PlanarPoint(tri.x_C + dx, tri.y_C + dy)
    D_w = anchor.frame.to_world(D)
    if not region.contains(D_w):
        return None
    try:
        E = solve_partner(D, tri, solver)
    except NotFoundError:
        return None
    except OutOfDomainError:
        return None
    E_w = anchor.frame.to_world(E)
    if not region.contains(E_w):
        return None
    verts = [anchor.A, anchor.B, E_w, D_w]
    if unscale != 1.0:
        verts = [p.scaled(unscale) for p in verts]
    try:
        cert = make_certificate(*verts, verify_region, cfg.target_area)
    except InputError:
        return None
    ok, _ = verify_certificate(cert, verify_region, cfg.certificate_tolerance)
    return cert if ok else None


def _trace_anchor(trace: SearchTrace, anchor: AnchorResult) -> None:
    tri = anchor.triangle
    trace.quadrant = anchor.quadrant
    trace.t = anchor.t
    trace.c = tri.c
    trace.anchor = {
        "c": tri.c,
        "x_C": tri.x_C,
        "y_C": tri.y_C,
        "alpha": tri.alpha,
        "beta": tri.beta,
        "gamma": tri.gamma,
        "A": list(anchor.A),
        "B": list(anchor.B),
        "C": list(anchor.C),
        "density": anchor.density,
    }


def find_unit_cyclic_quad(region: CellRegion, cfg: FinderConfig = FinderConfig()) -> Tuple[QuadCertificate, SearchTrace]:
    """Four region points forming a convex cyclic quadrilateral of area ``cfg.target_area``.

    Areas other than 1 are handled by searching the region dilated by
    ``target_area ** -0.5`` and scaling the result back.
    """
    if not len(region):
        raise NoSliceError("the region is empty: no slice has positive length")
    unscale = 1.0
    work = region
    if cfg.target_area != 1.0:
        unscale = math.sqrt(cfg.target_area)
        work = region.scaled(1.0 / unscale)
    trace = SearchTrace(scale=unscale)
    stats = _AnchorStats()
    found_anchor = False
    try:
        for anchor in iter_anchor_triangles(work, cfg.anchor, stats):
            found_anchor = True
            trace.anchors_tried += 1
            _trace_anchor(trace, anchor)
            trace.d_index = None
            cert = _partner_search(work, anchor, cfg, region, unscale, trace)
            if cert is not None:
                return cert, trace
            if trace.anchors_tried >= cfg.max_anchors:
                break
    except NoSliceError as exc:
        trace.failure = str(exc)
        raise
    if not found_anchor:
        msg = (
            f"no anchor triangle with lower-half density >= {cfg.anchor.density_threshold:g} found in the window "
            f"(best density seen {stats.best_density:.4f} over {stats.slices_seen} slices)"
        )
        trace.failure = msg
        err = AnchorNotFoundError(msg, best_density=stats.best_density)
        err.trace = trace
        raise err
    msg = (
        f"no D candidate produced a partner inside the region "
        f"({trace.d_candidates_tried} candidates over {trace.anchors_tried} anchors)"
    )
    trace.failure = msg
    err = ExhaustedCandidatesError(msg, tried=trace.d_candidates_tried)
    err.trace = trace
    raise err


def replay_trace(region: CellRegion, trace: SearchTrace, cfg: FinderConfig = FinderConfig()) -> QuadCertificate:
    """Rebuild the certificate recorded by a successful search trace."""
    if trace.d_index is None or trace.anchor is None:
        raise InputError("trace does not record a successful search")
    unscale = trace.scale
    work = region.scaled(1.0 / unscale) if unscale != 1.0 else region
    a = trace.anchor
    tri = AnchorTriangle(a["c"], a["x_C"], a["y_C"], cfg.anchor.angle_margin)
    axes = cfg.anchor.axes or default_axes(work)
    turn = axes.frame(trace.quadrant)
    A = PlanarPoint(*a["A"])
    anchor = AnchorResult(tri, RigidMotion(A, turn.cos, turn.sin), A, PlanarPoint(*a["B"]), PlanarPoint(*a["C"]), trace.quadrant, trace.t, a["density"])
    rho = cfg.solver.radius_for(tri)
    eps = cfg.anchor.density_radius if cfg.anchor.density_radius is not None else 0.5 * work.h
    rho = min(rho, eps)
    solver = replace(cfg.solver, rho=rho, frame=anchor.frame)
    dx, dy = sweep_offsets(rho, cfg.sweep_levels)[trace.d_index]
    cert = _candidate(work, anchor, solver, trace.d_index, dx, dy, cfg, region, unscale)
    if cert is None:
        raise InputError("trace does not reproduce a valid certificate")
    return cert
