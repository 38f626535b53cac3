"""Planar primitives: signed areas, circumcircles, concyclicity, convexity.

Orientation convention throughout the package: counterclockwise polygons have
positive signed area.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence, Tuple

from .errors import DegenerateCircleError, DegenerateTriangleError, InvalidPolygonError

# Triples whose |signed area| falls below this multiple of the squared
# bounding-box diagonal are treated as collinear.
COLLINEAR_RTOL = 1e-14


class _PointBase(NamedTuple):
    x: float
    y: float


class PlanarPoint(_PointBase):
    """A point of the plane. Coordinates must be finite."""

    __slots__ = ()

    def __new__(cls, x, y):
        x = float(x)
        y = float(y)
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ValueError(f"non-finite coordinates ({x!r}, {y!r})")
        return super().__new__(cls, x, y)

    def __sub__(self, other):
        return PlanarPoint(self.x - other[0], self.y - other[1])

    def __add__(self, other):
        return PlanarPoint(self.x + other[0], self.y + other[1])

    def scaled(self, s: float) -> "PlanarPoint":
        return PlanarPoint(self.x * s, self.y * s)


def distance(p, q) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])


@dataclass(frozen=True)
class Circle:
    center: PlanarPoint
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"circle radius must be positive, got {self.radius!r}")


@dataclass(frozen=True)
class Polygon:
    """Ordered vertex list, at least three vertices, no repeated neighbours."""

    vertices: Tuple[PlanarPoint, ...]

    def __post_init__(self):
        verts = tuple(PlanarPoint(*v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        _check_vertices(verts)

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def __getitem__(self, k):
        return self.vertices[k]


def _check_vertices(verts: Sequence) -> None:
    n = len(verts)
    if n < 3:
        raise InvalidPolygonError(f"a polygon needs at least 3 vertices, got {n}")
    for k in range(n):
        p, q = verts[k], verts[(k + 1) % n]
        if p[0] == q[0] and p[1] == q[1]:
            raise InvalidPolygonError(f"vertices {k} and {(k + 1) % n} coincide")


def _vertices(p) -> Sequence:
    if isinstance(p, Polygon):
        return p.vertices
    _check_vertices(p)
    return p


def cross(o, a, b) -> float:
    """z-component of (a - o) x (b - o)."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def triangle_signed_area(p1, p2, p3) -> float:
    return 0.5 * cross(p1, p2, p3)


def polygon_area(p) -> float:
    """Shoelace signed area; positive iff the vertices run counterclockwise."""
    verts = _vertices(p)
    n = len(verts)
    # anchor at the first vertex to keep the products small
    x0, y0 = verts[0]
    total = 0.0
    for k in range(1, n - 1):
        ax, ay = verts[k][0] - x0, verts[k][1] - y0
        bx, by = verts[k + 1][0] - x0, verts[k + 1][1] - y0
        total += ax * by - ay * bx
    return 0.5 * total


def _is_collinear(p1, p2, p3) -> bool:
    xs = (p1[0], p2[0], p3[0])
    ys = (p1[1], p2[1], p3[1])
    diag2 = (max(xs) - min(xs)) ** 2 + (max(ys) - min(ys)) ** 2
    return abs(triangle_signed_area(p1, p2, p3)) < COLLINEAR_RTOL * diag2 or diag2 == 0.0


def circumcircle(p1, p2, p3) -> Circle:
    if _is_collinear(p1, p2, p3):
        raise DegenerateCircleError(f"points {p1}, {p2}, {p3} are collinear")
    bx, by = p2[0] - p1[0], p2[1] - p1[1]
    cx, cy = p3[0] - p1[0], p3[1] - p1[1]
    d = 2.0 * (bx * cy - by * cx)
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ux = (cy * b2 - by * c2) / d
    uy = (bx * c2 - cx * b2) / d
    return Circle(PlanarPoint(p1[0] + ux, p1[1] + uy), math.hypot(ux, uy))


def concyclicity_residual(p1, p2, p3, p4) -> float:
    """Max deviation of the four points from the circumcircle of the first three.

    Measured as ``|dist(p, center) - radius| / radius``, so it is 0 exactly for
    concyclic points and dimensionless otherwise.
    """
    circ = circumcircle(p1, p2, p3)
    r = circ.radius
    return max(abs(distance(p, circ.center) - r) / r for p in (p1, p2, p3, p4))


def is_convex_ccw(p) -> bool:
    """Strictly convex and counterclockwise.

    Every turn must be a strict left turn and the boundary must wind exactly
    once; the second condition only matters from five vertices on (a
    pentagram turns left everywhere).
    """
    verts = _vertices(p)
    n = len(verts)
    turning = 0.0
    for k in range(n):
        a, b, c = verts[k - 1], verts[k], verts[(k + 1) % n]
        z = cross(a, b, c)
        if not z > 0:
            return False
        ux, uy = b[0] - a[0], b[1] - a[1]
        vx, vy = c[0] - b[0], c[1] - b[1]
        turning += math.atan2(ux * vy - uy * vx, ux * vx + uy * vy)
    return abs(turning - 2.0 * math.pi) < 1e-6


def _angle_at(p, q, r) -> float:
    """Interior angle at p of triangle pqr, in degrees."""
    ux, uy = q[0] - p[0], q[1] - p[1]
    vx, vy = r[0] - p[0], r[1] - p[1]
    return math.degrees(math.atan2(abs(ux * vy - uy * vx), ux * vx + uy * vy))


def triangle_angles(A, B, C) -> Tuple[float, float, float]:
    """Angles (at A, at B, at C) in degrees."""
    if _is_collinear(A, B, C):
        raise DegenerateTriangleError(f"triangle {A}, {B}, {C} is degenerate")
    return _angle_at(A, B, C), _angle_at(B, C, A), _angle_at(C, A, B)


_QUARTER = {0: (1.0, 0.0), 1: (0.0, 1.0), 2: (-1.0, 0.0), 3: (0.0, -1.0)}


@dataclass(frozen=True)
class RigidMotion:
    """Orientation-preserving motion ``local = R(theta) (world - origin)``.

    Quarter turns are stored with exact cosines and sines so that mapping a
    point back and forth only incurs the rounding of the translation.
    """

    origin: PlanarPoint = PlanarPoint(0.0, 0.0)
    cos: float = 1.0
    sin: float = 0.0

    @classmethod
    def from_angle(cls, origin, radians: float) -> "RigidMotion":
        return cls(PlanarPoint(*origin), math.cos(radians), math.sin(radians))

    @classmethod
    def quarter_turn(cls, origin, k: int) -> "RigidMotion":
        co, si = _QUARTER[k % 4]
        return cls(PlanarPoint(*origin), co, si)

    def to_local(self, p) -> PlanarPoint:
        dx, dy = p[0] - self.origin.x, p[1] - self.origin.y
        return PlanarPoint(self.cos * dx - self.sin * dy, self.sin * dx + self.cos * dy)

    def to_world(self, q) -> PlanarPoint:
        x, y = q[0], q[1]
        return PlanarPoint(
            self.origin.x + (self.cos * x + self.sin * y),
            self.origin.y + (-self.sin * x + self.cos * y),
        )

    def direction_to_world(self, v) -> Tuple[float, float]:
        return (self.cos * v[0] + self.sin * v[1], -self.sin * v[0] + self.cos * v[1])
