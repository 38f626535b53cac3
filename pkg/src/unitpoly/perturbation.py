"""The constraint map for unit-area cyclic quadrilaterals ABED and its solver.

Everything here works in the *anchor frame*: ``A = (0, 0)``, ``B = (c, 0)``
and ``C = (x_C, y_C)`` with ``c * y_C = 2``, so that triangle ABC has area 1.
For a point D near C the map ``f`` returns the point E on

* the line ``y_D x + (c - x_D) y = 2`` (area of ABED equals 1), and
* the circle through A, B, D,

selected on the branch through ``f(C) = C``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Optional, Tuple

import numpy as np

from .errors import ConvergenceError, NoSolutionError, OutOfDomainError
from .geometry import (
    PlanarPoint,
    RigidMotion,
    concyclicity_residual,
    is_convex_ccw,
    polygon_area,
    triangle_angles,
)

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class AnchorTriangle:
    """Area-1 triangle in the anchor frame.

    Only ``c``, ``x_C`` and ``y_C`` are stored; side lengths and angles (in
    degrees) are derived.  The base angles must lie strictly between
    ``angle_margin`` and ``180 - angle_margin``.
    """

    c: float
    x_C: float
    y_C: float
    angle_margin: float = 30.0
    a: float = field(init=False)
    b: float = field(init=False)
    alpha: float = field(init=False)
    beta: float = field(init=False)
    gamma: float = field(init=False)

    def __post_init__(self):
        c, x, y = float(self.c), float(self.x_C), float(self.y_C)
        if not (c > 0 and y > 0 and math.isfinite(x)):
            raise OutOfDomainError(f"anchor triangle needs c > 0 and y_C > 0, got c={c}, y_C={y}")
        if abs(c * y - 2.0) > 1e-12:
            raise OutOfDomainError(f"anchor triangle must have area 1: c*y_C = {c * y!r}")
        alpha, beta, gamma = triangle_angles((0.0, 0.0), (c, 0.0), (x, y))
        lo, hi = self.angle_margin, 180.0 - self.angle_margin
        if not (lo < alpha < hi and lo < beta < hi):
            raise OutOfDomainError(
                f"base angles ({alpha:.6g}, {beta:.6g}) outside ({lo:g}, {hi:g}) degrees"
            )
        for name, value in (
            ("c", c),
            ("x_C", x),
            ("y_C", y),
            ("a", math.hypot(x - c, y)),
            ("b", math.hypot(x, y)),
            ("alpha", alpha),
            ("beta", beta),
            ("gamma", gamma),
        ):
            object.__setattr__(self, name, value)

    @classmethod
    def from_base(cls, c: float, x_C: float, angle_margin: float = 30.0) -> "AnchorTriangle":
        return cls(c, x_C, 2.0 / c, angle_margin)

    @classmethod
    def from_angles(cls, alpha: float, beta: float, angle_margin: float = 30.0) -> "AnchorTriangle":
        """The unique area-1 triangle with base angles ``alpha``, ``beta`` (degrees)."""
        ra, rb = math.radians(alpha), math.radians(beta)
        sg = math.sin(ra + rb)
        if not sg > 0:
            raise OutOfDomainError(f"alpha + beta must be below 180 degrees, got {alpha + beta}")
        c = math.sqrt(2.0 * sg / (math.sin(ra) * math.sin(rb)))
        b = c * math.sin(rb) / sg
        return cls(c, b * math.cos(ra), 2.0 / c, angle_margin)

    @property
    def A(self) -> PlanarPoint:
        return PlanarPoint(0.0, 0.0)

    @property
    def B(self) -> PlanarPoint:
        return PlanarPoint(self.c, 0.0)

    @property
    def C(self) -> PlanarPoint:
        return PlanarPoint(self.x_C, self.y_C)


@dataclass(frozen=True)
class SolverConfig:
    newton_tolerance: float = 1e-12
    max_iterations: int = 50
    rho: Optional[float] = None  # None: 0.05 * min(1, y_C)
    frame: RigidMotion = RigidMotion()

    def __post_init__(self):
        if not self.newton_tolerance > 0:
            raise ValueError("newton_tolerance must be positive")
        if self.rho is not None and not self.rho > 0:
            raise ValueError("rho must be positive")

    def radius_for(self, tri: AnchorTriangle) -> float:
        return self.rho if self.rho is not None else 0.05 * min(1.0, tri.y_C)


@dataclass(frozen=True)
class JacobianPair:
    """Partial differentials of the constraint map in (x_D, y_D) and (x_E, y_E)."""

    d1: np.ndarray
    d2: np.ndarray


def phi(D, E, tri: AnchorTriangle) -> Tuple[float, float]:
    """(area condition, circle condition) for the quadrilateral ABED."""
    xd, yd = D[0], D[1]
    if not yd > 0:
        raise OutOfDomainError(f"D must lie above the x-axis, got y_D = {yd!r}")
    xe, ye = E[0], E[1]
    c = tri.c
    return (
        yd * xe + (c - xd) * ye - 2.0,
        xe * xe + ye * ye - c * xe + ((c * xd - xd * xd - yd * yd) / yd) * ye,
    )


def phi_jacobians(tri: AnchorTriangle) -> JacobianPair:
    """Both differentials at (C, C)."""
    c, x, y = tri.c, tri.x_C, tri.y_C
    d1 = np.array([[-y, x], [c - 2.0 * x, (x * x - c * x - y * y) / y]])
    d2 = np.array([[y, c - x], [2.0 * x - c, (-x * x + c * x + y * y) / y]])
    return JacobianPair(d1, d2)


def phi_jacobians_at(D, E, tri: AnchorTriangle) -> JacobianPair:
    """Both differentials at a general pair (D, E)."""
    c = tri.c
    xd, yd = D[0], D[1]
    xe, ye = E[0], E[1]
    k = (c * xd - xd * xd - yd * yd) / yd
    d1 = np.array(
        [
            [-ye, xe],
            [(c - 2.0 * xd) * ye / yd, ye * (-(c * xd - xd * xd) / (yd * yd) - 1.0)],
        ]
    )
    d2 = np.array([[yd, c - xd], [2.0 * xe - c, 2.0 * ye + k]])
    return JacobianPair(d1, d2)


def jacobian_f_at_C(tri: AnchorTriangle, form: Literal["coordinate", "trigonometric"] = "trigonometric") -> np.ndarray:
    if form == "coordinate":
        c, x, y = tri.c, tri.x_C, tri.y_C
        a2 = (x - c) ** 2 + y * y
        b2 = x * x + y * y
        return np.array([[1.0, c * (x * x - c * x - y * y) / (a2 * y)], [0.0, b2 / a2]])
    if form == "trigonometric":
        al, be, ga = (math.radians(v) for v in (tri.alpha, tri.beta, tri.gamma))
        sa = math.sin(al)
        off = (math.cos(2 * al) * math.sin(be) - math.cos(al) * math.sin(ga)) * math.sin(ga) / sa**3
        return np.array([[1.0, off], [0.0, math.sin(be) ** 2 / sa**2]])
    raise ValueError(f"unknown form {form!r}")


def implicit_jacobian(D, E, tri: AnchorTriangle) -> np.ndarray:
    """``-d2^{-1} d1`` at (D, E); equals df(D) when E = f(D)."""
    jp = phi_jacobians_at(D, E, tri)
    return -np.linalg.solve(jp.d2, jp.d1)


def operator_norm_bound(tri: AnchorTriangle) -> float:
    """Frobenius norm of df(C), an upper bound for its operator norm."""
    return float(np.linalg.norm(jacobian_f_at_C(tri), "fro"))


def first_order_prediction(D, tri: AnchorTriangle) -> PlanarPoint:
    J = jacobian_f_at_C(tri, "coordinate")
    dx, dy = D[0] - tri.x_C, D[1] - tri.y_C
    return PlanarPoint(tri.x_C + J[0, 0] * dx + J[0, 1] * dy, tri.y_C + J[1, 0] * dx + J[1, 1] * dy)


def _quadratic_roots(qa: float, qb: float, qc: float):
    disc = qb * qb - 4.0 * qa * qc
    if disc < 0:
        # tangency up to rounding still counts as one (double) root
        if disc > -64.0 * _EPS * (qb * qb + abs(4.0 * qa * qc)):
            disc = 0.0
        else:
            return ()
    sq = math.sqrt(disc)
    q = -0.5 * (qb + math.copysign(sq, qb))
    if q == 0.0:
        return (0.0,)
    return (q / qa, qc / q)


def _residual(D, E, tri) -> float:
    r1, r2 = phi(D, E, tri)
    return max(abs(r1), abs(r2))


def _newton(D, E, tri, cfg: SolverConfig):
    best, best_res = E, _residual(D, E, tri)
    ex, ey = E
    for _ in range(cfg.max_iterations):
        if best_res <= cfg.newton_tolerance:
            break
        r = phi(D, (ex, ey), tri)
        jp = phi_jacobians_at(D, (ex, ey), tri)
        try:
            step = np.linalg.solve(jp.d2, np.array(r))
        except np.linalg.LinAlgError:
            break
        ex, ey = ex - float(step[0]), ey - float(step[1])
        res = _residual(D, (ex, ey), tri)
        if res < best_res:
            best, best_res = (ex, ey), res
        elif abs(step[0]) + abs(step[1]) <= 4.0 * _EPS * (abs(ex) + abs(ey)):
            break
    return PlanarPoint(*best), best_res


def _rounding_floor(D, E, tri) -> float:
    # evaluation noise of phi near the root
    scale = 1.0 + tri.c * tri.c + E[0] ** 2 + E[1] ** 2 + D[0] ** 2 + D[1] ** 2
    return 16.0 * _EPS * scale * (1.0 + abs(tri.c * D[0]) / D[1] + 1.0 / D[1])


def implicit_map(D, tri: AnchorTriangle, cfg: SolverConfig = SolverConfig()) -> PlanarPoint:
    """E = f(D) on the branch through (C, C), for any D with y_D > 0.

    E is the intersection of the area line with the circle through A, B, D
    that lies closer to the first-order prediction ``C + df(C)(D - C)``,
    refined by Newton steps on the constraint map.
    """
    xd, yd = float(D[0]), float(D[1])
    if not yd > 0:
        raise OutOfDomainError(f"D must lie above the x-axis, got y_D = {yd!r}")
    D = PlanarPoint(xd, yd)
    c = tri.c
    pred = first_order_prediction(D, tri)
    nx, ny = yd, c - xd
    n2 = nx * nx + ny * ny
    if n2 < 1e-14:
        E0 = pred
    else:
        k = (c * xd - xd * xd - yd * yd) / yd
        # E(s) = P0 + s u with P0 = 2 n / |n|^2 the foot point and u perpendicular to n
        p0x, p0y = 2.0 * nx / n2, 2.0 * ny / n2
        ux, uy = -ny, nx
        qa = n2
        qb = c * c - xd * xd - yd * yd
        qc = (4.0 - 2.0 * c * yd + 2.0 * k * ny) / n2
        roots = _quadratic_roots(qa, qb, qc)
        if not roots:
            raise NoSolutionError(f"area line misses the circle through A, B, D for D={D}")
        cands = [PlanarPoint(p0x + s * ux, p0y + s * uy) for s in roots]
        dists = [math.hypot(p.x - pred.x, p.y - pred.y) for p in cands]
        if len(cands) == 2 and abs(dists[0] - dists[1]) <= 1e-12:
            E0 = max(cands, key=lambda p: p.x)
        else:
            E0 = cands[int(np.argmin(dists))]
    E, res = _newton(D, E0, tri, cfg)
    if res > max(cfg.newton_tolerance, _rounding_floor(D, E, tri)):
        raise ConvergenceError(f"Newton refinement stalled at residual {res:.3e} for D={D}")
    return E


def solve_partner(D, tri: AnchorTriangle, cfg: SolverConfig = SolverConfig()) -> PlanarPoint:
    """The partner E = f(D) making ABED a cyclic quadrilateral of area 1.

    D must lie in the lower half-disk ``|DC| < rho, 0 < y_D <= y_C`` (on the
    horizontal line through C the partner is D itself).  The result is
    checked: for D strictly below C the quadrilateral A, B, E, D must be
    strictly convex and counterclockwise with E below C.
    """
    xd, yd = float(D[0]), float(D[1])
    rho = cfg.radius_for(tri)
    if not yd > 0:
        raise OutOfDomainError(f"D must lie above the x-axis, got y_D = {yd!r}")
    if yd > tri.y_C:
        raise OutOfDomainError(f"D must not lie above the horizontal line through C (y_D={yd!r})")
    if not math.hypot(xd - tri.x_C, yd - tri.y_C) < rho:
        raise OutOfDomainError(f"D={D} is not within rho={rho:g} of C")
    E = implicit_map((xd, yd), tri, cfg)
    if yd < tri.y_C:
        if not E.y < tri.y_C:
            raise NoSolutionError(f"partner {E} of D={D} is not below C")
        if not is_convex_ccw((tri.A, tri.B, E, (xd, yd))):
            raise NoSolutionError(f"A, B, E, D is not a convex counterclockwise quadrilateral for D={D}")
    return E


def quad_residuals(D, E, tri: AnchorTriangle) -> Tuple[float, float]:
    """(|area(ABED) - 1|, concyclicity residual) in the anchor frame."""
    quad = (tri.A, tri.B, E, D)
    return abs(polygon_area(quad) - 1.0), concyclicity_residual(tri.A, tri.B, E, D)
