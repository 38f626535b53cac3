"""Raster planar sets and the measure-theoretic subroutines run on them.

A :class:`CellRegion` is a finite union of closed square cells
``[i h, (i+1) h] x [j h, (j+1) h]``.  Cell bounds are the floating point
products ``i * h``; membership compares against exactly those numbers.

Quadrants are the four closed sectors cut out by the two diagonal lines
through an origin O.  Quadrant 1 is the upper sector ``y' >= |x'|`` (primes:
coordinates relative to O), then 2 = left, 3 = lower, 4 = right.  Each has a
*quadrant frame*, the quarter turn about O that maps it onto the upper sector;
horizontal slices in that frame are rows or columns of the raster.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import EmptyRegionError, InputError, UnrealizableDistanceError
from .geometry import PlanarPoint, RigidMotion, polygon_area

_OFF = 1 << 30
_MUL = 1 << 31
# exact density by clipping up to this many cells, stratified sampling above
EXACT_DENSITY_LIMIT = 1_000_000

Interval = Tuple[float, float]


def _encode(major: np.ndarray, minor: np.ndarray) -> np.ndarray:
    return (major.astype(np.int64) + _OFF) * _MUL + (minor.astype(np.int64) + _OFF)


# ---------------------------------------------------------------------------
# predicates for generated regions


class Predicate:
    kind = ""

    def __call__(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Disk(Predicate):
    center: Tuple[float, float]
    radius: float
    kind = "disk"

    def __call__(self, x, y):
        return (x - self.center[0]) ** 2 + (y - self.center[1]) ** 2 <= self.radius**2

    def to_dict(self):
        return {"kind": self.kind, "center": list(self.center), "radius": self.radius}


@dataclass(frozen=True)
class Rectangle(Predicate):
    lo: Tuple[float, float]
    hi: Tuple[float, float]
    kind = "rectangle"

    def __call__(self, x, y):
        return (x >= self.lo[0]) & (x <= self.hi[0]) & (y >= self.lo[1]) & (y <= self.hi[1])

    def to_dict(self):
        return {"kind": self.kind, "min": list(self.lo), "max": list(self.hi)}


@dataclass(frozen=True)
class HalfPlane(Predicate):
    """``normal . p <= offset``."""

    normal: Tuple[float, float]
    offset: float
    kind = "halfplane"

    def __call__(self, x, y):
        return self.normal[0] * x + self.normal[1] * y <= self.offset

    def to_dict(self):
        return {"kind": self.kind, "normal": list(self.normal), "offset": self.offset}


@dataclass(frozen=True)
class HyperbolaRegionPredicate(Predicate):
    """``x > 1, y > 0, 4 x y < 1``."""

    kind = "hyperbola-region"

    def __call__(self, x, y):
        return (x > 1) & (y > 0) & (4.0 * x * y < 1.0)

    def to_dict(self):
        return {"kind": self.kind}


@dataclass(frozen=True)
class Union(Predicate):
    children: Tuple[Predicate, ...]
    kind = "union"

    def __call__(self, x, y):
        out = np.zeros(np.broadcast(x, y).shape, dtype=bool)
        for ch in self.children:
            out |= ch(x, y)
        return out

    def to_dict(self):
        return {"kind": self.kind, "children": [c.to_dict() for c in self.children]}


@dataclass(frozen=True)
class Intersection(Predicate):
    children: Tuple[Predicate, ...]
    kind = "intersection"

    def __call__(self, x, y):
        out = np.ones(np.broadcast(x, y).shape, dtype=bool)
        for ch in self.children:
            out &= ch(x, y)
        return out

    def to_dict(self):
        return {"kind": self.kind, "children": [c.to_dict() for c in self.children]}


# ---------------------------------------------------------------------------


class CellRegion:
    """Immutable union of closed lattice cells at resolution ``h``."""

    def __init__(self, h: float, cells, generator: Optional[dict] = None):
        h = float(h)
        if not (h > 0 and math.isfinite(h)):
            raise InputError(f"resolution h must be positive, got {h!r}")
        arr = np.asarray(cells, dtype=np.int64).reshape(-1, 2)
        if arr.size and (np.abs(arr).max() >= _OFF):
            raise InputError("cell indices out of range")
        self.h = h
        self.generator = generator
        keys = np.unique(_encode(arr[:, 1], arr[:, 0]))
        keys.setflags(write=False)
        self._row_keys = keys
        self._col_keys = None

    # -- construction -----------------------------------------------------

    @classmethod
    def from_predicate(cls, predicate: Predicate, window, h: float) -> "CellRegion":
        """Cells of the window whose centre satisfies the predicate."""
        x0, y0, x1, y1 = (float(v) for v in window)
        if not (x1 > x0 and y1 > y0):
            raise InputError(f"empty window {window!r}")
        i = np.arange(math.floor(x0 / h), math.ceil(x1 / h), dtype=np.int64)
        j = np.arange(math.floor(y0 / h), math.ceil(y1 / h), dtype=np.int64)
        if i.size * j.size > 50_000_000:
            raise InputError("window holds more than 5e7 cells; use a coarser h")
        ii, jj = np.meshgrid(i, j)
        ii, jj = ii.ravel(), jj.ravel()
        mask = predicate((ii + 0.5) * h, (jj + 0.5) * h)
        gen = {"predicate": predicate.to_dict(), "window": [x0, y0, x1, y1]}
        return cls(h, np.stack([ii[mask], jj[mask]], axis=1), generator=gen)

    def scaled(self, s: float) -> "CellRegion":
        """The same cell indices at resolution ``s * h``: the region dilated by s."""
        reg = CellRegion.__new__(CellRegion)
        reg.h = self.h * s
        reg.generator = None
        reg._row_keys = self._row_keys
        reg._col_keys = self._col_keys
        return reg

    # -- basic queries ----------------------------------------------------

    def __len__(self):
        return int(self._row_keys.size)

    @property
    def measure(self) -> float:
        return len(self) * self.h * self.h

    @property
    def cells(self) -> np.ndarray:
        """(N, 2) array of (i, j), sorted by row then column."""
        k = self._row_keys
        return np.stack([(k % _MUL) - _OFF, (k // _MUL) - _OFF], axis=1)

    def bbox(self) -> Tuple[float, float, float, float]:
        if not len(self):
            raise EmptyRegionError("empty region has no bounding box")
        c = self.cells
        h = self.h
        return (c[:, 0].min() * h, c[:, 1].min() * h, (c[:, 0].max() + 1) * h, (c[:, 1].max() + 1) * h)

    def has_cell(self, i: int, j: int) -> bool:
        key = (j + _OFF) * _MUL + (i + _OFF)
        pos = np.searchsorted(self._row_keys, key)
        return bool(pos < self._row_keys.size and self._row_keys[pos] == key)

    def _has_cells(self, i: np.ndarray, j: np.ndarray) -> np.ndarray:
        keys = _encode(j, i)
        pos = np.searchsorted(self._row_keys, keys)
        pos = np.minimum(pos, max(self._row_keys.size - 1, 0))
        if not self._row_keys.size:
            return np.zeros(keys.shape, dtype=bool)
        return self._row_keys[pos] == keys

    def _index_candidates(self, v: float) -> List[int]:
        h = self.h
        k = math.floor(v / h)
        return [m for m in (k - 1, k, k + 1) if m * h <= v <= (m + 1) * h]

    def contains(self, p) -> bool:
        """Exact closed-cell membership."""
        x, y = float(p[0]), float(p[1])
        if not (math.isfinite(x) and math.isfinite(y)):
            return False
        for i in self._index_candidates(x):
            for j in self._index_candidates(y):
                if self.has_cell(i, j):
                    return True
        return False

    def contains_many(self, xs, ys) -> np.ndarray:
        """Vectorised membership (cell of floor(x/h), floor(y/h) only)."""
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        i = np.floor(xs / self.h).astype(np.int64)
        j = np.floor(ys / self.h).astype(np.int64)
        return self._has_cells(i, j)

    # -- rows and columns -------------------------------------------------

    def _cols_sorted(self) -> np.ndarray:
        if self._col_keys is None:
            c = self.cells
            keys = np.sort(_encode(c[:, 0], c[:, 1]))
            keys.setflags(write=False)
            self._col_keys = keys
        return self._col_keys

    @staticmethod
    def _runs(keys: np.ndarray, major: int) -> List[Tuple[int, int]]:
        lo = np.searchsorted(keys, (major + _OFF) * _MUL)
        hi = np.searchsorted(keys, (major + _OFF + 1) * _MUL)
        minor = keys[lo:hi] - (major + _OFF) * _MUL - _OFF
        if not minor.size:
            return []
        breaks = np.nonzero(np.diff(minor) != 1)[0]
        starts = np.concatenate([[0], breaks + 1])
        ends = np.concatenate([breaks, [minor.size - 1]])
        return [(int(minor[s]), int(minor[e])) for s, e in zip(starts, ends)]

    def row_intervals(self, j: int) -> List[Interval]:
        """x-intervals covered by row j, as maximal runs of adjacent cells."""
        h = self.h
        return [(a * h, (b + 1) * h) for a, b in self._runs(self._row_keys, j)]

    def col_intervals(self, i: int) -> List[Interval]:
        h = self.h
        return [(a * h, (b + 1) * h) for a, b in self._runs(self._cols_sorted(), i)]

    def cells_in_box(self, x0, y0, x1, y1) -> np.ndarray:
        """(M, 2) cells meeting the closed box."""
        h = self.h
        j0, j1 = math.floor(y0 / h) - 1, math.floor(y1 / h) + 1
        i0, i1 = math.floor(x0 / h) - 1, math.floor(x1 / h) + 1
        rows = np.arange(j0, j1 + 1, dtype=np.int64)
        lo = np.searchsorted(self._row_keys, _encode(rows, np.full_like(rows, i0)))
        hi = np.searchsorted(self._row_keys, _encode(rows, np.full_like(rows, i1)), side="right")
        if not np.any(hi > lo):
            return np.zeros((0, 2), dtype=np.int64)
        idx = np.concatenate([np.arange(a, b) for a, b in zip(lo, hi) if b > a])
        k = self._row_keys[idx]
        out = np.stack([(k % _MUL) - _OFF, (k // _MUL) - _OFF], axis=1)
        xs0, ys0 = out[:, 0] * h, out[:, 1] * h
        keep = (xs0 <= x1) & ((out[:, 0] + 1) * h >= x0) & (ys0 <= y1) & ((out[:, 1] + 1) * h >= y0)
        return out[keep]


# ---------------------------------------------------------------------------
# quadrants


_QUADRANT_TURNS = {1: 0, 2: 3, 3: 2, 4: 1}
QUADRANT_NAMES = {1: "upper", 2: "left", 3: "lower", 4: "right"}


@dataclass(frozen=True)
class QuadrantAxes:
    """Two orthogonal lines through ``origin``.

    Only the diagonal pair (direction ``(1, 1)`` and its normal) is
    supported: with it every quadrant frame is a quarter turn and slices stay
    aligned with the raster.
    """

    origin: PlanarPoint
    direction: Tuple[float, float] = (1.0, 1.0)

    def __post_init__(self):
        object.__setattr__(self, "origin", PlanarPoint(*self.origin))
        dx, dy = self.direction
        if not (dx != 0 and abs(dx) == abs(dy)):
            raise InputError(f"quadrant axes must be the diagonals, got direction {self.direction!r}")

    def frame(self, quadrant: int) -> RigidMotion:
        return RigidMotion.quarter_turn(self.origin, _QUADRANT_TURNS[quadrant])


def default_axes(region: CellRegion) -> QuadrantAxes:
    """Diagonals through the centre of the bounding box, snapped to the lattice."""
    x0, y0, x1, y1 = region.bbox()
    h = region.h
    ox = round((x0 + x1) / (2 * h)) * h
    oy = round((y0 + y1) / (2 * h)) * h
    return QuadrantAxes(PlanarPoint(ox, oy))


def _clip(poly, a, b, c):
    """Clip a polygon to ``a x + b y >= c``."""
    out = []
    n = len(poly)
    for k in range(n):
        p, q = poly[k], poly[(k + 1) % n]
        fp = a * p[0] + b * p[1] - c
        fq = a * q[0] + b * q[1] - c
        if fp >= 0:
            out.append(p)
        if (fp >= 0) != (fq >= 0):
            s = fp / (fp - fq)
            out.append((p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])))
    return out


# sector k is {sign_u * (y - x) >= 0 and sign_v * (y + x) >= 0} relative to O
_SECTOR_SIGNS = {1: (1, 1), 2: (1, -1), 3: (-1, -1), 4: (-1, 1)}


@dataclass(frozen=True)
class QuadrantChoice:
    index: int
    measures: Tuple[float, float, float, float]

    @property
    def ranking(self) -> List[int]:
        """Quadrants by decreasing measure, ties to the smaller index."""
        return sorted(range(1, 5), key=lambda k: (-self.measures[k - 1], k))


def quadrant_measures(region: CellRegion, axes: QuadrantAxes) -> Tuple[float, float, float, float]:
    h = region.h
    c = region.cells
    ox, oy = axes.origin
    x0 = c[:, 0] * h - ox
    x1 = (c[:, 0] + 1) * h - ox
    y0 = c[:, 1] * h - oy
    y1 = (c[:, 1] + 1) * h - oy
    umin, umax = y0 - x1, y1 - x0
    vmin, vmax = y0 + x0, y1 + x1
    totals = [0.0] * 4
    whole = np.zeros(c.shape[0], dtype=bool)
    for k, (su, sv) in _SECTOR_SIGNS.items():
        u_ok = umin >= 0 if su > 0 else umax <= 0
        v_ok = vmin >= 0 if sv > 0 else vmax <= 0
        inside = u_ok & v_ok
        whole |= inside
        totals[k - 1] += float(np.count_nonzero(inside)) * h * h
    for idx in np.nonzero(~whole)[0]:
        square = [(x0[idx], y0[idx]), (x1[idx], y0[idx]), (x1[idx], y1[idx]), (x0[idx], y1[idx])]
        for k, (su, sv) in _SECTOR_SIGNS.items():
            piece = _clip(square, -su, su, 0.0)  # su * (y - x) >= 0
            if len(piece) >= 3:
                piece = _clip(piece, sv, sv, 0.0)  # sv * (y + x) >= 0
            if len(piece) >= 3:
                totals[k - 1] += abs(_shoelace(piece))
    return tuple(totals)


def _shoelace(pts) -> float:
    s = 0.0
    n = len(pts)
    for k in range(n):
        p, q = pts[k], pts[(k + 1) % n]
        s += p[0] * q[1] - p[1] * q[0]
    return 0.5 * s


def quadrant_select(region: CellRegion, axes: Optional[QuadrantAxes] = None) -> QuadrantChoice:
    """The quadrant holding the largest part of the region (ties: smallest index)."""
    if not len(region):
        raise EmptyRegionError("quadrant selection needs a nonempty region")
    axes = axes or default_axes(region)
    measures = quadrant_measures(region, axes)
    best = max(range(1, 5), key=lambda k: (measures[k - 1], -k))
    return QuadrantChoice(best, measures)


# ---------------------------------------------------------------------------
# slices and difference sets


def merge_intervals(intervals: Iterable[Interval]) -> List[Interval]:
    out: List[List[float]] = []
    for lo, hi in sorted(intervals):
        if out and lo <= out[-1][1]:
            out[-1][1] = max(out[-1][1], hi)
        else:
            out.append([lo, hi])
    return [(a, b) for a, b in out]


def positive_differences(intervals: Sequence[Interval]) -> List[Interval]:
    """Closed intervals whose union is ``(I - I) ∩ [0, inf)``."""
    diffs = []
    for li, ri in intervals:
        for lj, rj in intervals:
            hi = rj - li
            if hi >= 0:
                diffs.append((max(lj - ri, 0.0), hi))
    return merge_intervals(diffs)


def difference_gap(intervals: Sequence[Interval]) -> float:
    """Largest d with every distance in (0, d] realised inside the intervals."""
    diffs = positive_differences(intervals)
    if diffs and diffs[0][0] == 0.0:
        return diffs[0][1]
    return 0.0


@dataclass(frozen=True)
class SliceAnalysis:
    """Intersection of the region with one horizontal segment of a quadrant frame.

    ``intervals`` are frame x-coordinates at frame height ``t``.
    """

    t: float
    intervals: Tuple[Interval, ...]
    total_length: float
    theta: float
    frame: RigidMotion = RigidMotion()

    @classmethod
    def from_intervals(cls, t: float, intervals: Iterable[Interval], frame: RigidMotion = RigidMotion()):
        ivs = tuple(merge_intervals(intervals))
        return cls(t, ivs, sum(b - a for a, b in ivs), difference_gap(ivs), frame)

    def point(self, x: float) -> PlanarPoint:
        return PlanarPoint(x, self.t)


def _world_line_intervals(region: CellRegion, frame: RigidMotion, t: float) -> List[Interval]:
    """Frame-x intervals where the frame line ``y = t`` meets the region."""
    h = region.h
    w0 = frame.to_world((0.0, t))
    ex = frame.direction_to_world((1.0, 0.0))
    if ex[1] == 0.0:  # frame x runs along world x: a raster row
        value, major_getter = w0.y, region.row_intervals
    else:
        value, major_getter = w0.x, region.col_intervals
    majors = [m for m in (math.floor(value / h) - 1, math.floor(value / h), math.floor(value / h) + 1)
              if m * h <= value <= (m + 1) * h]
    world = [iv for m in majors for iv in major_getter(m)]
    origin_along = w0.x if ex[1] == 0.0 else w0.y
    sign = ex[0] if ex[1] == 0.0 else ex[1]
    out = []
    for lo, hi in merge_intervals(world):
        a, b = sign * (lo - origin_along), sign * (hi - origin_along)
        out.append((min(a, b), max(a, b)))
    return sorted(out)


def slice_at(region: CellRegion, t: float, axes: Optional[QuadrantAxes] = None, quadrant: int = 1) -> SliceAnalysis:
    """The region on the segment from (-t, t) to (t, t) of the quadrant frame."""
    if not t >= 0:
        raise InputError(f"slice height must be nonnegative, got {t!r}")
    axes = axes or default_axes(region)
    frame = axes.frame(quadrant)
    clipped = []
    for lo, hi in _world_line_intervals(region, frame, t):
        lo, hi = max(lo, -t), min(hi, t)
        if lo <= hi:
            clipped.append((lo, hi))
    return SliceAnalysis.from_intervals(t, clipped, frame)


def slice_profile(region: CellRegion, axes: QuadrantAxes, quadrant: int) -> Tuple[np.ndarray, np.ndarray]:
    """Slice heights through cell centres and the slice lengths there.

    Heights run along the quadrant frame's y-axis; only heights with a
    positive slice length are returned.
    """
    h = region.h
    frame = axes.frame(quadrant)
    c = region.cells
    cx = (c[:, 0] + 0.5) * h
    cy = (c[:, 1] + 0.5) * h
    ox, oy = axes.origin
    lx = frame.cos * (cx - ox) - frame.sin * (cy - oy)
    ly = frame.sin * (cx - ox) + frame.cos * (cy - oy)
    keep = ly > 0
    lx, ly = lx[keep], ly[keep]
    # each cell spans lx +- h/2 along its slice; clip to [-t, t]
    overlap = np.clip(np.minimum(lx + 0.5 * h, ly) - np.maximum(lx - 0.5 * h, -ly), 0.0, None)
    heights, inv = np.unique(ly, return_inverse=True)
    lengths = np.bincount(inv, weights=overlap, minlength=heights.size)
    pos = lengths > 0
    return heights[pos], lengths[pos]


def admissible_starts(intervals: Sequence[Interval], c: float) -> List[Interval]:
    """Closed intervals of x with both x and x + c in the union of ``intervals``."""
    out = []
    for li, ri in intervals:
        for lj, rj in intervals:
            lo, hi = max(li, lj - c), min(ri, rj - c)
            if lo <= hi:
                out.append((lo, hi))
    return merge_intervals(out)


def pair_at_distance(
    slc: SliceAnalysis, c: float, near: Optional[float] = None, margin: float = 0.0
) -> Tuple[PlanarPoint, PlanarPoint]:
    """Two slice points at distance ``c``, A to the left of B.

    By default A is the smallest admissible x.  With ``near`` the admissible x
    closest to ``near`` is taken instead, kept ``margin`` away from the ends
    of its admissible interval where the interval is long enough.
    """
    if not c > 0:
        raise InputError(f"distance must be positive, got {c!r}")
    starts = admissible_starts(slc.intervals, c)
    if not starts:
        raise UnrealizableDistanceError(f"distance {c!r} is not realised in the slice at t={slc.t!r}")
    if near is None:
        x = starts[0][0]
    else:
        best = None
        for lo, hi in starts:
            m = min(margin, 0.5 * (hi - lo))
            cand = min(max(near, lo + m), hi - m)
            if best is None or abs(cand - near) < abs(best - near):
                best = cand
        x = best
    xb = x + c
    # keep B inside a closed interval despite rounding of x + c
    for lo, hi in slc.intervals:
        if lo - 4 * abs(lo) * 1e-16 - 1e-300 <= xb <= hi + 4 * abs(hi) * 1e-16 + 1e-300:
            xb = min(max(xb, lo), hi)
            break
    return slc.point(x), slc.point(xb)


# ---------------------------------------------------------------------------
# local density


def _corner_area(x: np.ndarray, y: np.ndarray, r: float) -> np.ndarray:
    """Signed area of the disk |p| <= r inside the box spanned by 0 and (x, y)."""
    sx, sy = np.sign(x), np.sign(y)
    ax = np.minimum(np.abs(x), r)
    ay = np.minimum(np.abs(y), r)
    r2 = r * r
    inside = ax * ax + ay * ay <= r2
    u0 = np.sqrt(np.maximum(r2 - ay * ay, 0.0))

    def prim(u):
        return 0.5 * (u * np.sqrt(np.maximum(r2 - u * u, 0.0)) + r2 * np.arcsin(np.clip(u / r, -1.0, 1.0)))

    outside = u0 * ay + prim(ax) - prim(u0)
    return sx * sy * np.where(inside, ax * ay, outside)


def disk_rect_area(x0, y0, x1, y1, r: float) -> np.ndarray:
    """Area of the disk of radius r about the origin inside each rectangle."""
    x0, y0, x1, y1 = (np.asarray(v, dtype=float) for v in (x0, y0, x1, y1))
    area = _corner_area(x1, y1, r) - _corner_area(x0, y1, r) - _corner_area(x1, y0, r) + _corner_area(x0, y0, r)
    return np.where((x1 > x0) & (y1 > y0), area, 0.0)




def local_density(region: CellRegion, C, eps: float, half: str = "full", up: Tuple[float, float] = (0.0, 1.0)) -> float:
    """Fraction of the disk (or lower half-disk) of radius eps at C covered by the region.

    ``half="lower"`` keeps the points p with ``(p - C) . up < 0``; ``up``
    must be an axis direction.
    """
    if not eps > 0:
        raise InputError(f"density radius must be positive, got {eps!r}")
    if half not in ("full", "lower"):
        raise InputError(f"half must be 'full' or 'lower', got {half!r}")
    if not len(region):
        return 0.0
    cx, cy = float(C[0]), float(C[1])
    cells = region.cells_in_box(cx - eps, cy - eps, cx + eps, cy + eps)
    total = math.pi * eps * eps * (0.5 if half == "lower" else 1.0)
    if cells.shape[0] > EXACT_DENSITY_LIMIT:
        return _sampled_density(region, cx, cy, eps, half, up) / total
    h = region.h
    x0 = cells[:, 0] * h - cx
    x1 = (cells[:, 0] + 1) * h - cx
    y0 = cells[:, 1] * h - cy
    y1 = (cells[:, 1] + 1) * h - cy
    if half == "lower":
        ux, uy = up
        if uy > 0:
            y1 = np.minimum(y1, 0.0)
        elif uy < 0:
            y0 = np.maximum(y0, 0.0)
        elif ux > 0:
            x1 = np.minimum(x1, 0.0)
        else:
            x0 = np.maximum(x0, 0.0)
    covered = float(disk_rect_area(x0, y0, x1, y1, eps).sum())
    return min(max(covered / total, 0.0), 1.0)


def _sampled_density(region, cx, cy, eps, half, up, m: int = 1000) -> float:
    rng = np.random.default_rng(0)
    step = 2.0 * eps / m
    g = (np.arange(m) + 0.0) * step - eps
    gx, gy = np.meshgrid(g, g)
    px = gx.ravel() + rng.uniform(0.0, step, gx.size)
    py = gy.ravel() + rng.uniform(0.0, step, gy.size)
    keep = px * px + py * py < eps * eps
    if half == "lower":
        keep &= px * up[0] + py * up[1] < 0
    hit = region.contains_many(px[keep] + cx, py[keep] + cy)
    return float(np.count_nonzero(hit)) * step * step
