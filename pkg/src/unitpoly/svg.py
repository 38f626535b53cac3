"""Plain SVG renderings of certified figures.

Figures are drawn from certificate data only; they carry no authority of
their own.  World coordinates are mapped to a fixed-width canvas with the
y-axis pointing up.
"""

from __future__ import annotations

import math
from typing import Iterable, List, Optional, Sequence, Tuple
from xml.sax.saxutils import escape

import numpy as np

from .finder import QuadCertificate
from .hyperbola import CaseCertificate
from .regions import CellRegion

MAX_CELLS_DRAWN = 20_000


class Canvas:
    def __init__(self, bbox: Tuple[float, float, float, float], width: int = 640, pad: float = 0.05):
        x0, y0, x1, y1 = bbox
        dx, dy = max(x1 - x0, 1e-12), max(y1 - y0, 1e-12)
        x0, x1 = x0 - pad * dx, x1 + pad * dx
        y0, y1 = y0 - pad * dy, y1 + pad * dy
        self.x0, self.y1 = x0, y1
        self.scale = width / (x1 - x0)
        self.width = width
        self.height = max(1, int(math.ceil((y1 - y0) * self.scale)))
        self.items: List[str] = []

    def xy(self, p) -> Tuple[float, float]:
        return (p[0] - self.x0) * self.scale, (self.y1 - p[1]) * self.scale

    def _pts(self, pts) -> str:
        return " ".join("%.3f,%.3f" % self.xy(p) for p in pts)

    def rect(self, lo, hi, fill: str, opacity: float = 1.0) -> None:
        x, y = self.xy((lo[0], hi[1]))
        w, h = (hi[0] - lo[0]) * self.scale, (hi[1] - lo[1]) * self.scale
        self.items.append(f'<rect x="{x:.3f}" y="{y:.3f}" width="{w:.3f}" height="{h:.3f}" fill="{fill}" fill-opacity="{opacity}"/>')

    def polygon(self, pts, stroke: str, fill: str = "none", width: float = 1.5) -> None:
        self.items.append(f'<polygon points="{self._pts(pts)}" fill="{fill}" fill-opacity="0.3" stroke="{stroke}" stroke-width="{width}"/>')

    def polyline(self, pts, stroke: str, width: float = 1.0, dash: Optional[str] = None) -> None:
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.items.append(f'<polyline points="{self._pts(pts)}" fill="none" stroke="{stroke}" stroke-width="{width}"{extra}/>')

    def circle(self, center, r: float, stroke: str, dash: Optional[str] = None) -> None:
        x, y = self.xy(center)
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.items.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="{r * self.scale:.3f}" fill="none" stroke="{stroke}"{extra}/>')

    def dot(self, p, label: str = "", color: str = "black") -> None:
        x, y = self.xy(p)
        self.items.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="3" fill="{color}"/>')
        if label:
            self.items.append(f'<text x="{x + 5:.3f}" y="{y - 5:.3f}" font-size="12" font-family="sans-serif">{escape(label)}</text>')

    def render(self, title: str = "") -> str:
        head = f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" height="{self.height}" viewBox="0 0 {self.width} {self.height}">'
        body = [head, '<rect width="100%" height="100%" fill="white"/>']
        if title:
            body.append(f"<title>{escape(title)}</title>")
        body.extend(self.items)
        body.append("</svg>")
        return "\n".join(body) + "\n"


def quad_figure(region: CellRegion, cert: QuadCertificate, zoom: bool = False) -> str:
    """Region cells, the quadrilateral ABED and its circumcircle."""
    verts = cert.vertices
    c, r = cert.circumcenter, cert.radius
    if zoom or not len(region):
        bbox = (c.x - r, c.y - r, c.x + r, c.y + r)
    else:
        bx0, by0, bx1, by1 = region.bbox()
        bbox = (min(bx0, c.x - r), min(by0, c.y - r), max(bx1, c.x + r), max(by1, c.y + r))
    cv = Canvas(bbox)
    cells = region.cells_in_box(*bbox)
    h = region.h
    if len(cells) <= MAX_CELLS_DRAWN:
        for i, j in np.asarray(cells).tolist():
            cv.rect((i * h, j * h), ((i + 1) * h, (j + 1) * h), "#9ecae1", 0.6)
    else:
        bx0, by0, bx1, by1 = region.bbox()
        cv.rect((bx0, by0), (bx1, by1), "#9ecae1", 0.3)
    cv.circle(c, r, "#636363", dash="4 3")
    cv.polygon(verts, "#d62728", "#d62728")
    for name, p in zip("ABED", verts):
        cv.dot(p, name)
    return cv.render(f"cyclic quadrilateral of area {cert.area!r}")


def _hyperbola_points(x0: float, x1: float, k: int = 200) -> List[Tuple[float, float]]:
    xs = np.geomspace(max(x0, 1.0), x1, k)
    return [(float(x), float(1.0 / (4.0 * x))) for x in xs]


def polygon_figure(vertices: Sequence, cert: Optional[CaseCertificate] = None) -> str:
    """The curve 4xy = 1, the polygon and the certifying line when there is one."""
    xs = [v[0] for v in vertices]
    ys = [v[1] for v in vertices]
    x_hi = max(max(xs) * 1.1, 2.0)
    line = None
    if cert is not None and "line" in cert.witness:
        la, lb, lc = cert.witness["line"]
        line = [(1.0, (lc - la) / lb), (lc / la, 0.0)]
        x_hi = max(x_hi, lc / la)
    bbox = (1.0, 0.0, x_hi, max(0.25, max(ys)))
    cv = Canvas(bbox)
    cv.polyline([(1.0, 0.0), (x_hi, 0.0)], "#252525")
    cv.polyline([(1.0, 0.0), (1.0, 0.25)], "#252525", dash="3 3")
    cv.polyline(_hyperbola_points(1.0, x_hi), "#2ca02c", 1.5)
    if line is not None:
        cv.polyline(line, "#ff7f0e", 1.2, dash="6 3")
    cv.polygon(vertices, "#1f77b4", "#1f77b4")
    title = "equilateral polygon under 4xy = 1"
    if cert is not None:
        title += f" ({cert.branch}, area bound {cert.certified_area_bound!r})"
    return cv.render(title)
