"""The region under the hyperbola 4xy = 1 and area bounds for equilateral polygons in it.

``S = {x > 1, y > 0, 4xy < 1}`` has infinite area, yet every convex polygon
with congruent sides and vertices in S has area below 1.  This module
replays that case analysis numerically on concrete polygons and returns a
:class:`CaseCertificate` naming the branch that bounds the area.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import CertificationError, OutOfDomainError, ValidationError
from .geometry import PlanarPoint, Polygon, distance, is_convex_ccw, polygon_area

BRANCHES = ("disjoint-tangent-bound", "small-side", "far-crossing", "projection-contradiction")

# two crossings closer than this in the segment parameter count as one tangency
TANGENCY_TOL = 1e-12


def region_contains(p) -> bool:
    x, y = float(p[0]), float(p[1])
    return x > 1 and y > 0 and 4.0 * x * y < 1.0


def region_measure(x_max: float) -> float:
    """Area of S inside the strip 1 < x < x_max."""
    return math.log(x_max) / 4.0 if x_max > 1 else 0.0


def on_obstacle(p) -> bool:
    """Membership in the closed convex set ``T = {x >= 1, 4xy >= 1}`` above S."""
    return p[0] >= 1 and 4.0 * p[0] * p[1] >= 1.0


@dataclass(frozen=True)
class Line:
    """``a x + b y = c``."""

    a: float
    b: float
    c: float

    def value(self, p) -> float:
        return self.a * p[0] + self.b * p[1] - self.c

    def y_at(self, x: float) -> float:
        return (self.c - self.a * x) / self.b


@dataclass(frozen=True)
class SecantTriangle:
    x1: float
    x2: float
    intercept: PlanarPoint  # on the x-axis
    y_intercept: float
    area: float
    line: Line


@dataclass(frozen=True)
class TangentTriangle:
    x1: float
    line: Line
    x_length: float
    y_length: float
    area: float


def _check_on_branch(*xs: float) -> None:
    for x in xs:
        if not x >= 1:
            raise OutOfDomainError(f"hyperbola points need x >= 1, got {x!r}")


def secant_triangle(x1: float, x2: float) -> SecantTriangle:
    """Triangle cut from the first quadrant by the line through two points of 4xy = 1."""
    _check_on_branch(x1, x2)
    prod = x1 * x2
    s = x1 + x2
    area = 0.5 + (x1 - x2) ** 2 / (8.0 * prod)
    # y = (-x + x1 + x2) / (4 x1 x2)
    return SecantTriangle(x1, x2, PlanarPoint(s, 0.0), s / (4.0 * prod), area, Line(1.0, 4.0 * prod, s))


def tangent_triangle(x1: float) -> TangentTriangle:
    """Triangle cut from the first quadrant by the tangent of 4xy = 1 at x1."""
    _check_on_branch(x1)
    # y = (-x + 2 x1) / (4 x1^2); the secant formula at x1 = x2 gives exactly 1/2
    return TangentTriangle(x1, Line(1.0, 4.0 * x1 * x1, 2.0 * x1), 2.0 * x1, 1.0 / (2.0 * x1), secant_triangle(x1, x1).area)


def segment_crossings(P, Q) -> List[PlanarPoint]:
    """Points where the segment PQ meets the hyperbola 4xy = 1, by increasing x.

    Solves ``4 x(s) y(s) = 1`` for ``s`` in [0, 1].  Two roots less than
    ``TANGENCY_TOL`` apart in ``s`` collapse to the single tangency point.
    """
    x0, y0 = P[0], P[1]
    dx, dy = Q[0] - x0, Q[1] - y0
    qa = 4.0 * dx * dy
    qb = 4.0 * (x0 * dy + y0 * dx)
    qc = 4.0 * x0 * y0 - 1.0
    roots: List[float] = []
    if qa == 0.0:
        if qb != 0.0:
            roots = [-qc / qb]
    else:
        disc = qb * qb - 4.0 * qa * qc
        # sqrt(disc) / |qa| is the distance between the two roots
        near = (TANGENCY_TOL * qa) ** 2
        if disc < -near:
            return []
        if disc <= near:
            roots = [-qb / (2.0 * qa)]
        else:
            sq = math.sqrt(disc)
            q = -0.5 * (qb + math.copysign(sq, qb))
            roots = sorted((q / qa, qc / q))
    pts = [PlanarPoint(x0 + s * dx, y0 + s * dy) for s in roots if 0.0 <= s <= 1.0]
    return sorted(pts, key=lambda p: p.x)


@dataclass(frozen=True)
class EquilateralPolygon:
    vertices: Polygon
    side: float
    side_tolerance: float = 1e-9

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def area(self) -> float:
        return polygon_area(self.vertices)


def validate_polygon(poly, tol: float = 1e-9) -> EquilateralPolygon:
    """Check the hypotheses: vertices in S, strictly convex CCW, congruent sides."""
    if not isinstance(poly, Polygon):
        poly = Polygon(tuple(poly))
    verts = poly.vertices
    n = len(verts)
    for k, p in enumerate(verts):
        if not region_contains(p):
            raise ValidationError(
                f"vertex {k} = ({p.x!r}, {p.y!r}) is not in the region (4xy = {4 * p.x * p.y!r})", index=k
            )
    if not is_convex_ccw(verts):
        raise ValidationError("polygon is not strictly convex and counterclockwise")
    sides = [distance(verts[k], verts[(k + 1) % n]) for k in range(n)]
    a = sum(sides) / n
    for k, s in enumerate(sides):
        if abs(s - a) > tol * a:
            raise ValidationError(f"side {k} has length {s!r}, mean side is {a!r}", index=k)
    return EquilateralPolygon(poly, a, tol)


@dataclass(frozen=True)
class CaseCertificate:
    branch: str
    certified_area_bound: float
    area: float
    witness: Dict[str, object] = field(default_factory=dict)


def best_tangent(vertices: Sequence) -> Tuple[float, float]:
    """Tangent point x_t >= 1 whose tangent line has the most room above all vertices.

    Returns ``(x_t, slack)`` where ``slack = min_v (2 x_t - x_v - 4 x_t^2 y_v)``;
    a nonnegative slack puts every vertex weakly below the tangent.
    """

    def slack(x):
        return min(2.0 * x - v[0] - 4.0 * x * x * v[1] for v in vertices)

    # slack is a minimum of concave quadratics: its maximiser is x = 1, a
    # vertex of one quadratic, or a crossing of two
    cands = [1.0]
    for v in vertices:
        cands.append(1.0 / (4.0 * v[1]))
    for i, u in enumerate(vertices):
        for w in vertices[i + 1:]:
            dy = w[1] - u[1]
            if dy != 0.0:
                q = (u[0] - w[0]) / (4.0 * dy)
                if q > 0:
                    cands.append(math.sqrt(q))
    best_x, best_s = 1.0, slack(1.0)
    for x in cands:
        if x >= 1.0:
            s = slack(x)
            if s > best_s:
                best_x, best_s = x, s
    return best_x, best_s


def projection_chain(vertices: Sequence, a: float) -> Dict[str, object]:
    """Numbers of the horizontal-projection argument for a polygon with side a.

    Every vertex of S has height below 1/4, so when ``a >= 2`` each side
    projects onto the x-axis with length at least ``7a/8``.  With A leftmost
    and B rightmost this forces ``a >= 7(n-1)a/8 > a``.
    """
    n = len(vertices)
    extents = [abs(vertices[(k + 1) % n][0] - vertices[k][0]) for k in range(n)]
    return {
        "a": a,
        "n": n,
        "min_horizontal_extent": min(extents),
        "seven_eighths_a": 7.0 * a / 8.0,
        "chain_lower_bound": 7.0 * (n - 1) * a / 8.0,
        "contradiction": a >= 2 and 7.0 * (n - 1) * a / 8.0 > a,
    }


def certify_area_bound(poly) -> CaseCertificate:
    """Run the case analysis on one polygon and return the branch that bounds its area."""
    if not isinstance(poly, EquilateralPolygon):
        poly = validate_polygon(poly)
    verts = poly.vertices.vertices
    n = len(verts)
    a = poly.side
    area = poly.area
    crossing_sides = []
    for k in range(n):
        pts = segment_crossings(verts[k], verts[(k + 1) % n])
        if pts:
            crossing_sides.append((k, pts))
    # counterclockwise, the upper boundary runs right to left.  T is closed
    # upwards, so a lower side inside T puts the upper side above it in T too,
    # and a concave upper boundary can enter the convex T along one side only.
    upper = [(k, pts) for k, pts in crossing_sides if verts[(k + 1) % n].x < verts[k].x]
    if crossing_sides and not upper:
        raise CertificationError(f"sides {[k for k, _ in crossing_sides]} meet T but no upper side does")
    if not crossing_sides:
        x_t, slack = best_tangent(verts)
        if slack < 0:
            raise CertificationError(f"polygon misses T but no tangent line clears it (slack {slack:.3e})")
        tri = tangent_triangle(x_t)
        return CaseCertificate(
            "disjoint-tangent-bound",
            tri.area,
            area,
            {"tangent_x": x_t, "tangent_point": [x_t, 1.0 / (4.0 * x_t)], "slack": slack, "line": [tri.line.a, tri.line.b, tri.line.c]},
        )
    if len(upper) > 1:
        raise CertificationError(f"upper sides {[k for k, _ in upper]} all meet T; at most one can")
    k, pts = upper[0]
    x1, x2 = pts[0].x, pts[-1].x
    sec = secant_triangle(max(x1, 1.0), max(x2, 1.0))
    side_bound = 0.5 + a * a / (8.0 * x1 * x2)
    P, Q = verts[k], verts[(k + 1) % n]
    B = P if P.x > Q.x else Q
    witness = {
        "side": k,
        "side_endpoints": [list(P), list(Q)],
        "crossings": [[x1, pts[0].y], [x2, pts[-1].y]],
        "secant_area": sec.area,
        "side_bound": side_bound,
        "M": list(sec.intercept),
        "N": [B.x, 0.0],
        "line": [sec.line.a, sec.line.b, sec.line.c],
    }
    bound = min(sec.area, side_bound)
    if a < 2:
        branch = "small-side"
    elif x1 >= 7.0 * a / 8.0:
        branch = "far-crossing"
    else:
        branch = "projection-contradiction"
        witness["chain"] = projection_chain(verts, a)
    if not bound < 1:
        raise CertificationError(f"branch {branch} yields no bound below 1 (bound {bound!r})")
    return CaseCertificate(branch, bound, area, witness)
