"""Randomised numeric self-checks shared by the command line and the test suite.

Each ``*_report`` function samples inputs from a seeded generator, compares
closed forms against independent computations and returns a flat dict of
worst-case errors together with a ``passed`` flag per check.
"""

from __future__ import annotations

import math
from typing import Dict, List

import numpy as np

from .errors import OutOfDomainError
from .hyperbola import secant_triangle, tangent_triangle
from .perturbation import (
    AnchorTriangle,
    SolverConfig,
    implicit_jacobian,
    implicit_map,
    jacobian_f_at_C,
    phi,
    phi_jacobians,
    quad_residuals,
    solve_partner,
)

JACOBIAN_TOL = 1e-12
FD_RTOL = 1e-6
FROBENIUS_BOUND = 20.0
DET_FLOOR = 0.25


def random_anchor_triangles(rng: np.random.Generator, count: int, lo: float = 31.0, hi: float = 149.0) -> List[AnchorTriangle]:
    """Area-1 triangles with both base angles uniform in (lo, hi) degrees.

    Pairs whose angle sum reaches 179 degrees are redrawn: they leave less
    than one degree for the apex and no room for a triangle.
    """
    out: List[AnchorTriangle] = []
    while len(out) < count:
        alpha, beta = rng.uniform(lo, hi, 2)
        if alpha + beta >= 179.0:
            continue
        out.append(AnchorTriangle.from_angles(float(alpha), float(beta)))
    return out


def finite_difference_jacobian(tri: AnchorTriangle, step: float = 1e-6, cfg: SolverConfig = SolverConfig()) -> np.ndarray:
    """Central differences of the partner map at C."""
    x, y = tri.x_C, tri.y_C
    cols = []
    for dx, dy in ((step, 0.0), (0.0, step)):
        ep = implicit_map((x + dx, y + dy), tri, cfg)
        em = implicit_map((x - dx, y - dy), tri, cfg)
        cols.append([(ep.x - em.x) / (2 * step), (ep.y - em.y) / (2 * step)])
    return np.array(cols).T


def jacobian_report(samples: int = 1000, seed: int = 0, step: float = 1e-6) -> Dict[str, object]:
    rng = np.random.default_rng(seed)
    worst = {"coordinate_form": 0.0, "implicit_form": 0.0, "finite_difference": 0.0, "det_d2": 0.0}
    max_fro, min_det = 0.0, math.inf
    for tri in random_anchor_triangles(rng, samples):
        J = jacobian_f_at_C(tri, "trigonometric")
        worst["coordinate_form"] = max(worst["coordinate_form"], float(np.abs(J - jacobian_f_at_C(tri, "coordinate")).max()))
        worst["implicit_form"] = max(worst["implicit_form"], float(np.abs(J - implicit_jacobian(tri.C, tri.C, tri)).max()))
        fd = finite_difference_jacobian(tri, step)
        worst["finite_difference"] = max(worst["finite_difference"], float(np.abs(fd - J).max() / np.abs(J).max()))
        d2 = phi_jacobians(tri).d2
        expected = (tri.x_C - tri.c) ** 2 + tri.y_C**2
        worst["det_d2"] = max(worst["det_d2"], abs(float(np.linalg.det(d2)) - expected) / expected)
        max_fro = max(max_fro, float(np.linalg.norm(J, "fro")))
        min_det = min(min_det, float(np.linalg.det(J)))
    return {
        "samples": samples,
        "seed": seed,
        "max_coordinate_form_error": worst["coordinate_form"],
        "max_implicit_form_error": worst["implicit_form"],
        "max_finite_difference_rel_error": worst["finite_difference"],
        "max_det_d2_rel_error": worst["det_d2"],
        "max_frobenius_norm": max_fro,
        "min_det": min_det,
        "passed": {
            "coordinate_form": worst["coordinate_form"] <= JACOBIAN_TOL,
            "implicit_form": worst["implicit_form"] <= JACOBIAN_TOL,
            "finite_difference": worst["finite_difference"] <= FD_RTOL,
            "det_d2": worst["det_d2"] <= JACOBIAN_TOL,
            "frobenius_bound": max_fro < FROBENIUS_BOUND,
            "det_bound": min_det >= DET_FLOOR - 1e-12,
        },
    }


def solver_report(samples: int = 1000, seed: int = 0, radius: float = 0.05) -> Dict[str, object]:
    """Partner solves for random D in the lower half-disk of radius ``radius`` at C."""
    rng = np.random.default_rng(seed)
    cfg = SolverConfig(rho=radius)
    worst_phi = worst_conc = worst_area = worst_fixed = worst_line = 0.0
    below = True
    for tri in random_anchor_triangles(rng, samples):
        r = radius * math.sqrt(rng.uniform(0.0, 1.0))
        th = rng.uniform(math.pi, 2.0 * math.pi)
        D = (tri.x_C + r * math.cos(th), min(tri.y_C + r * math.sin(th), math.nextafter(tri.y_C, 0.0)))
        E = solve_partner(D, tri, cfg)
        worst_phi = max(worst_phi, max(abs(v) for v in phi(D, E, tri)))
        area, conc = quad_residuals(D, E, tri)
        worst_area = max(worst_area, area)
        worst_conc = max(worst_conc, conc)
        below &= E.y < tri.y_C
        F = solve_partner(tri.C, tri, cfg)
        worst_fixed = max(worst_fixed, math.hypot(F.x - tri.x_C, F.y - tri.y_C))
        # on the horizontal line through C the partner is D itself
        Dl = (tri.x_C + rng.uniform(-0.5, 0.5) * radius, tri.y_C)
        El = solve_partner(Dl, tri, cfg)
        worst_line = max(worst_line, math.hypot(El.x - Dl[0], El.y - Dl[1]))
    return {
        "samples": samples,
        "seed": seed,
        "max_phi": worst_phi,
        "max_concyclicity": worst_conc,
        "max_area_error": worst_area,
        "all_partners_below_C": bool(below),
        "max_fixed_point_error": worst_fixed,
        "max_line_error": worst_line,
        "passed": {
            "phi": worst_phi <= 1e-10,
            "concyclicity": worst_conc <= 1e-9,
            "area": worst_area <= 1e-9,
            "below_C": bool(below),
            "fixed_point": worst_fixed <= 1e-12,
            "line": worst_line <= 1e-10,
        },
    }


def axes_triangle_area(x1: np.ndarray, x2: np.ndarray):
    """Intercepts and area of the line through (x1, 1/(4 x1)) and (x2, 1/(4 x2)).

    Computed from the homogeneous line through the two points, without the
    simplifications that lead to the closed form.
    """
    y1, y2 = 1.0 / (4.0 * x1), 1.0 / (4.0 * x2)
    la, lb, lc = y1 - y2, x2 - x1, x2 * y1 - x1 * y2  # la x + lb y = lc
    x_int, y_int = lc / la, lc / lb
    return x_int, y_int, 0.5 * x_int * y_int


def triangle_area_report(samples: int = 100_000, seed: int = 0, lo: float = 1.0, hi: float = 1000.0) -> Dict[str, object]:
    rng = np.random.default_rng(seed)
    x1 = rng.uniform(lo, hi, samples)
    x2 = rng.uniform(lo, hi, samples)
    keep = x1 != x2
    x1, x2 = x1[keep], x2[keep]
    formula = 0.5 + (x1 - x2) ** 2 / (8.0 * x1 * x2)
    ox, _, oarea = axes_triangle_area(x1, x2)
    tris = [secant_triangle(float(a), float(b)) for a, b in zip(x1, x2)]
    areas = np.array([t.area for t in tris])
    inter_x = np.array([t.intercept.x for t in tris])
    inter_y = np.array([t.intercept.y for t in tris])
    tangent_ok = all(tangent_triangle(float(a)).area == 0.5 for a in x1[:1000])
    rel_formula = float(np.max(np.abs(areas - formula) / formula))
    rel_oracle = float(np.max(np.abs(areas - oarea) / oarea))
    icpt = float(max(np.max(np.abs(inter_x - (x1 + x2))), np.max(np.abs(inter_y))))
    return {
        "samples": int(x1.size),
        "seed": seed,
        "max_formula_rel_error": rel_formula,
        "max_oracle_rel_error": rel_oracle,
        "max_oracle_intercept_rel_error": float(np.max(np.abs(ox - (x1 + x2)) / (x1 + x2))),
        "max_intercept_error": icpt,
        "tangent_area_exact": bool(tangent_ok),
        "passed": {
            "formula": rel_formula <= 1e-9,
            "oracle": rel_oracle <= 1e-9,
            "intercept": icpt <= 1e-12,
            "tangent": bool(tangent_ok),
        },
    }


def all_passed(report: Dict[str, object]) -> bool:
    return all(report["passed"].values())
