"""JSON file formats for regions, quadrilateral certificates and hyperbola polygons.

Floats are written with ``repr`` (the shortest decimal that round-trips to
the same double), so a certificate read back from disk re-verifies bit for
bit.  Parse errors name the offending field path, or the line and column
for malformed JSON.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from .errors import ParseError
from .finder import QuadCertificate, SearchTrace
from .geometry import PlanarPoint, Polygon
from .hyperbola import CaseCertificate
from .regions import (
    CellRegion,
    Disk,
    HalfPlane,
    HyperbolaRegionPredicate,
    Intersection,
    Predicate,
    Rectangle,
    Union as UnionPredicate,
)

REGION_FORMAT = "unitpoly-region"
QUAD_FORMAT = "unitpoly-quad-certificate"
POLYGON_FORMAT = "unitpoly-polygon"
CASE_FORMAT = "unitpoly-case-certificate"
SEARCH_FORMAT = "unitpoly-polygon-search"

PathLike = Union[str, Path]


# ---------------------------------------------------------------------------
# low-level helpers


def dumps(obj: Any) -> str:
    return json.dumps(_plain(obj), indent=2, allow_nan=False) + "\n"


def write_json(path: PathLike, obj: Any) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")


def loads(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def read_json(path: PathLike) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: cannot read file ({exc.strerror})") from None
    return loads(text, str(path))


def _plain(obj: Any) -> Any:
    """Turn numpy scalars, tuples and named tuples into JSON-ready values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return int(obj)
    if hasattr(obj, "item"):  # numpy scalar
        return _plain(obj.item())
    if isinstance(obj, float):
        return float(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _field(obj: Any, key: str, path: str) -> Any:
    if not isinstance(obj, dict):
        raise ParseError(f"{path}: expected an object")
    if key not in obj:
        raise ParseError(f"{path}.{key}: missing field")
    return obj[key]


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{path}: expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ParseError(f"{path}: number must be finite")
    return value


def _integer(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{path}: expected an integer, got {value!r}")
    return value


def _point(value: Any, path: str) -> PlanarPoint:
    if not isinstance(value, list) or len(value) != 2:
        raise ParseError(f"{path}: expected a pair [x, y]")
    return PlanarPoint(_number(value[0], f"{path}[0]"), _number(value[1], f"{path}[1]"))


def _check_format(doc: Any, expected: str, path: str) -> None:
    fmt = doc.get("format", expected) if isinstance(doc, dict) else None
    if fmt != expected:
        raise ParseError(f"{path}.format: expected {expected!r}, got {fmt!r}")


# ---------------------------------------------------------------------------
# regions


def predicate_from_dict(d: Any, path: str = "predicate") -> Predicate:
    kind = _field(d, "kind", path)
    if kind == "disk":
        return Disk(_point(_field(d, "center", path), f"{path}.center"), _number(_field(d, "radius", path), f"{path}.radius"))
    if kind == "rectangle":
        return Rectangle(_point(_field(d, "min", path), f"{path}.min"), _point(_field(d, "max", path), f"{path}.max"))
    if kind == "halfplane":
        return HalfPlane(_point(_field(d, "normal", path), f"{path}.normal"), _number(_field(d, "offset", path), f"{path}.offset"))
    if kind == "hyperbola-region":
        return HyperbolaRegionPredicate()
    if kind in ("union", "intersection"):
        children = _field(d, "children", path)
        if not isinstance(children, list) or not children:
            raise ParseError(f"{path}.children: expected a nonempty list")
        parsed = tuple(predicate_from_dict(c, f"{path}.children[{k}]") for k, c in enumerate(children))
        return UnionPredicate(parsed) if kind == "union" else Intersection(parsed)
    raise ParseError(f"{path}.kind: unknown predicate kind {kind!r}")


def region_to_dict(region: CellRegion, explicit: bool = False) -> Dict[str, Any]:
    """Generator form when the region came from a predicate, else the cell list."""
    if region.generator is not None and not explicit:
        return {"format": REGION_FORMAT, "h": region.h, **region.generator}
    return {"format": REGION_FORMAT, "h": region.h, "cells": region.cells.tolist()}


def region_from_dict(doc: Any, path: str = "region") -> CellRegion:
    _check_format(doc, REGION_FORMAT, path)
    h = _number(_field(doc, "h", path), f"{path}.h")
    if not h > 0:
        raise ParseError(f"{path}.h: resolution must be positive")
    if "cells" in doc:
        cells = doc["cells"]
        if not isinstance(cells, list):
            raise ParseError(f"{path}.cells: expected a list of [i, j] pairs")
        for k, c in enumerate(cells):
            if not isinstance(c, list) or len(c) != 2:
                raise ParseError(f"{path}.cells[{k}]: expected a pair [i, j]")
            _integer(c[0], f"{path}.cells[{k}][0]")
            _integer(c[1], f"{path}.cells[{k}][1]")
        return CellRegion(h, cells)
    if "predicate" in doc:
        pred = predicate_from_dict(doc["predicate"], f"{path}.predicate")
        window = _field(doc, "window", path)
        if not isinstance(window, list) or len(window) != 4:
            raise ParseError(f"{path}.window: expected [x_min, y_min, x_max, y_max]")
        win = [_number(v, f"{path}.window[{k}]") for k, v in enumerate(window)]
        return CellRegion.from_predicate(pred, win, h)
    raise ParseError(f"{path}: needs either a cells list or a predicate with a window")


def load_region(path: PathLike) -> CellRegion:
    return region_from_dict(read_json(path), str(path))


# ---------------------------------------------------------------------------
# quadrilateral certificates


def certificate_to_dict(cert: QuadCertificate, trace: Optional[SearchTrace] = None) -> Dict[str, Any]:
    out: Dict[str, Any] = {
        "format": QUAD_FORMAT,
        "vertices": {"A": list(cert.A), "B": list(cert.B), "E": list(cert.E), "D": list(cert.D)},
        "circumcenter": list(cert.circumcenter),
        "radius": cert.radius,
        "area": cert.area,
        "target_area": cert.target_area,
        "area_residual": cert.area_residual,
        "concyclicity": cert.concyclicity,
        "membership": list(cert.membership),
    }
    if trace is not None:
        out["trace"] = asdict(trace)
    return out


def certificate_from_dict(doc: Any, path: str = "certificate") -> Tuple[QuadCertificate, Optional[SearchTrace]]:
    _check_format(doc, QUAD_FORMAT, path)
    verts = _field(doc, "vertices", path)
    pts = [_point(_field(verts, n, f"{path}.vertices"), f"{path}.vertices.{n}") for n in "ABED"]
    membership = _field(doc, "membership", path)
    if not isinstance(membership, list) or len(membership) != 4 or not all(isinstance(m, bool) for m in membership):
        raise ParseError(f"{path}.membership: expected four booleans")
    cert = QuadCertificate(
        *pts,
        circumcenter=_point(_field(doc, "circumcenter", path), f"{path}.circumcenter"),
        radius=_number(_field(doc, "radius", path), f"{path}.radius"),
        area=_number(_field(doc, "area", path), f"{path}.area"),
        area_residual=_number(_field(doc, "area_residual", path), f"{path}.area_residual"),
        concyclicity=_number(_field(doc, "concyclicity", path), f"{path}.concyclicity"),
        membership=tuple(membership),
        target_area=_number(doc.get("target_area", 1.0), f"{path}.target_area"),
    )
    trace = None
    if "trace" in doc and doc["trace"] is not None:
        raw = doc["trace"]
        if not isinstance(raw, dict):
            raise ParseError(f"{path}.trace: expected an object")
        known = set(SearchTrace.__dataclass_fields__)
        unknown = sorted(set(raw) - known)
        if unknown:
            raise ParseError(f"{path}.trace.{unknown[0]}: unknown field")
        trace = SearchTrace(**raw)
    return cert, trace


# ---------------------------------------------------------------------------
# polygons and case certificates


def polygon_to_dict(vertices) -> Dict[str, Any]:
    return {"format": POLYGON_FORMAT, "vertices": [list(v) for v in vertices]}


def polygon_from_dict(doc: Any, path: str = "polygon") -> Polygon:
    _check_format(doc, POLYGON_FORMAT, path)
    verts = _field(doc, "vertices", path)
    if not isinstance(verts, list):
        raise ParseError(f"{path}.vertices: expected a list of [x, y] pairs")
    pts = [_point(v, f"{path}.vertices[{k}]") for k, v in enumerate(verts)]
    if len(pts) < 3:
        raise ParseError(f"{path}.vertices: a polygon needs at least 3 vertices, got {len(pts)}")
    return Polygon(tuple(pts))


def load_polygon(path: PathLike) -> Polygon:
    return polygon_from_dict(read_json(path), str(path))


def case_certificate_to_dict(cert: CaseCertificate, vertices) -> Dict[str, Any]:
    return {
        "format": CASE_FORMAT,
        "vertices": [list(v) for v in vertices],
        "branch": cert.branch,
        "certified_area_bound": cert.certified_area_bound,
        "area": cert.area,
        "witness": cert.witness,
    }


def case_certificate_from_dict(doc: Any, path: str = "certificate") -> Tuple[CaseCertificate, Polygon]:
    _check_format(doc, CASE_FORMAT, path)
    poly = polygon_from_dict({"vertices": _field(doc, "vertices", path)}, path)
    branch = _field(doc, "branch", path)
    if not isinstance(branch, str):
        raise ParseError(f"{path}.branch: expected a string")
    witness = doc.get("witness", {})
    if not isinstance(witness, dict):
        raise ParseError(f"{path}.witness: expected an object")
    cert = CaseCertificate(
        branch,
        _number(_field(doc, "certified_area_bound", path), f"{path}.certified_area_bound"),
        _number(_field(doc, "area", path), f"{path}.area"),
        witness,
    )
    return cert, poly


def load_polygon_or_certificate(path: PathLike) -> Tuple[Polygon, Optional[CaseCertificate]]:
    """Polygon files and case-certificate files are both accepted where a polygon is expected."""
    doc = read_json(path)
    if isinstance(doc, dict) and doc.get("format") == CASE_FORMAT:
        cert, poly = case_certificate_from_dict(doc, str(path))
        return poly, cert
    return polygon_from_dict(doc, str(path)), None
