"""Command-line entry point.

Exit codes: 0 success, 1 mathematical failure (nothing found, a check or a
re-verification failed), 2 bad input.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import asdict
from pathlib import Path
from typing import List, Optional

from . import checks, serialize, svg
from .annealing import search_max_area
from .errors import InputError, NotFoundError, UnitPolyError
from .finder import AnchorSearchConfig, FinderConfig, find_unit_cyclic_quad, verify_certificate
from .hyperbola import certify_area_bound, validate_polygon
from .perturbation import SolverConfig

log = logging.getLogger("unitpoly")

EXIT_OK, EXIT_FAILURE, EXIT_INPUT = 0, 1, 2


def _positive(kind):
    def parse(text):
        value = kind(text)
        if not value > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return value

    return parse


def _emit(obj, out: Optional[str]) -> None:
    text = serialize.dumps(obj)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _write_svg(path: Optional[str], text: str) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")


# ---------------------------------------------------------------------------
# subcommands


def cmd_find_quad(args) -> int:
    region = serialize.load_region(args.region)
    anchor = AnchorSearchConfig(
        angle_margin=args.angle_margin,
        density_threshold=args.density_threshold,
        density_radius=args.density_radius,
    )
    cfg = FinderConfig(
        anchor=anchor,
        solver=SolverConfig(rho=args.rho),
        target_area=args.target_area,
        max_anchors=args.max_anchors,
        certificate_tolerance=args.tol,
    )
    try:
        cert, trace = find_unit_cyclic_quad(region, cfg)
    except NotFoundError as exc:
        trace = getattr(exc, "trace", None)
        if trace is not None and args.trace:
            serialize.write_json(args.trace, {"failure": str(exc), "trace": asdict(trace)})
        raise
    _emit(serialize.certificate_to_dict(cert, trace), args.output)
    _write_svg(args.svg, svg.quad_figure(region, cert, zoom=True))
    log.info("found quadrilateral of area %r (residual %.3e)", cert.area, cert.area_residual)
    return EXIT_OK


def cmd_verify_quad(args) -> int:
    region = serialize.load_region(args.region)
    cert, _ = serialize.certificate_from_dict(serialize.read_json(args.certificate), args.certificate)
    ok, diags = verify_certificate(cert, region, args.tol)
    for line in diags:
        print(line)
    print("certificate verified" if ok else "certificate rejected")
    return EXIT_OK if ok else EXIT_FAILURE


def _report_exit(report, out) -> int:
    _emit(report, out)
    return EXIT_OK if checks.all_passed(report) else EXIT_FAILURE


def cmd_check_jacobian(args) -> int:
    report = checks.jacobian_report(args.samples, args.seed, args.step)
    report["solver"] = checks.solver_report(args.samples, args.seed)
    report["passed"].update({f"solver_{k}": v for k, v in report["solver"]["passed"].items()})
    return _report_exit(report, args.output)


def cmd_lemma_check(args) -> int:
    return _report_exit(checks.triangle_area_report(args.samples, args.seed), args.output)


def cmd_polygon_certify(args) -> int:
    poly, claimed = serialize.load_polygon_or_certificate(args.polygon)
    eq = validate_polygon(poly, args.tol)
    cert = certify_area_bound(eq)
    _emit(serialize.case_certificate_to_dict(cert, eq.vertices), args.output)
    _write_svg(args.svg, svg.polygon_figure(eq.vertices, cert))
    if claimed is not None and (claimed.branch != cert.branch or claimed.certified_area_bound != cert.certified_area_bound):
        print(
            f"claimed branch {claimed.branch} with bound {claimed.certified_area_bound!r} does not match "
            f"recomputed {cert.branch} with bound {cert.certified_area_bound!r}",
            file=sys.stderr,
        )
        return EXIT_FAILURE
    return EXIT_OK if cert.certified_area_bound < 1 and cert.area <= cert.certified_area_bound else EXIT_FAILURE


def cmd_polygon_search(args) -> int:
    if args.n_min < 3 or args.n_max < args.n_min:
        raise InputError(f"need 3 <= n-min <= n-max, got {args.n_min} and {args.n_max}")
    outcomes = search_max_area(args.n_min, args.n_max, args.iterations, args.seed)
    results = []
    ok = True
    for n, o in outcomes.items():
        cert = certify_area_bound(o.best)
        chain_bounds = [certify_area_bound(p).certified_area_bound for p in o.chain_bests]
        ok &= cert.certified_area_bound < 1 and max(chain_bounds) < 1 and o.projection_violations == 0
        results.append(
            {
                "n": n,
                "area": o.area,
                "side": o.best.side,
                "certificate": serialize.case_certificate_to_dict(cert, o.best.vertices),
                "max_valid_area": o.max_valid_area,
                "proposals": o.proposals,
                "valid_candidates": o.valid_candidates,
                "large_side_meeting_obstacle": o.meets_obstacle_large_side,
                "projection_violations": o.projection_violations,
                "max_chain_bound": max(chain_bounds),
            }
        )
    doc = {"format": serialize.SEARCH_FORMAT, "seed": args.seed, "iterations": args.iterations, "results": results}
    _emit(doc, args.output)
    if args.svg:
        top = max(outcomes.values(), key=lambda o: o.area)
        _write_svg(args.svg, svg.polygon_figure(top.best.vertices, certify_area_bound(top.best)))
    return EXIT_OK if ok else EXIT_FAILURE


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="unitpoly", description="Unit-area cyclic quadrilaterals and equilateral polygons under a hyperbola.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", metavar="command")
    sub.required = True

    s = sub.add_parser("find-quad", help="find a cyclic quadrilateral of given area inside a region")
    s.add_argument("region", help="region JSON file")
    s.add_argument("-o", "--output", help="certificate file (default: stdout)")
    s.add_argument("--target-area", type=_positive(float), default=1.0)
    s.add_argument("--density-threshold", type=float, default=AnchorSearchConfig.density_threshold)
    s.add_argument("--density-radius", type=_positive(float), default=None, help="default: half the cell size")
    s.add_argument("--angle-margin", type=float, default=AnchorSearchConfig.angle_margin, help="base angles stay in (m, 180 - m) degrees")
    s.add_argument("--rho", type=_positive(float), default=None, help="radius of the D sweep around C")
    s.add_argument("--max-anchors", type=_positive(int), default=FinderConfig.max_anchors)
    s.add_argument("--tol", type=_positive(float), default=1e-9)
    s.add_argument("--trace", help="write the search trace here when nothing is found")
    s.add_argument("--svg", help="write a figure of the certificate")
    s.set_defaults(func=cmd_find_quad)

    s = sub.add_parser("verify-quad", help="re-verify a quadrilateral certificate against a region")
    s.add_argument("region")
    s.add_argument("certificate")
    s.add_argument("--tol", type=_positive(float), default=1e-9)
    s.set_defaults(func=cmd_verify_quad)

    s = sub.add_parser("check-jacobian", help="compare the differential of the partner map against its references")
    s.add_argument("--samples", type=_positive(int), default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--step", type=_positive(float), default=1e-6, help="finite-difference step")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_check_jacobian)

    s = sub.add_parser("lemma-check", help="check the secant and tangent triangle areas of 4xy = 1")
    s.add_argument("--samples", type=_positive(int), default=100_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_lemma_check)

    s = sub.add_parser("polygon-certify", help="validate an equilateral polygon under 4xy = 1 and bound its area")
    s.add_argument("polygon", help="polygon or case-certificate JSON file")
    s.add_argument("-o", "--output")
    s.add_argument("--tol", type=_positive(float), default=1e-9, help="relative side-length tolerance")
    s.add_argument("--svg")
    s.set_defaults(func=cmd_polygon_certify)

    s = sub.add_parser("polygon-search", help="anneal for large equilateral polygons under 4xy = 1")
    s.add_argument("--n-min", type=int, default=3)
    s.add_argument("--n-max", type=int, default=12)
    s.add_argument("--iterations", type=_positive(int), default=100_000, help="evaluated candidates per vertex count")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("-o", "--output")
    s.add_argument("--svg")
    s.set_defaults(func=cmd_polygon_search)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NotFoundError as exc:
        print(f"not found: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except UnitPolyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
