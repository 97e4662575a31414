"""JSON and SVG output of triangulations."""

from __future__ import annotations

import math
from xml.sax.saxutils import quoteattr

import numpy as np

from .mesh import Triangulation

SCHEMA = "delaunay-measure/1"
VIEWBOX = 1000.0


def triangulation_json(t: Triangulation) -> dict:
    """Vertex, edge and face arrays with per-edge ``theta``, tagged with the schema."""
    out = {"schema": SCHEMA, **t.to_dict()}
    live = np.isfinite(t.circumradii)
    out["circumcenters"] = [[w.real, w.imag] if ok else None
                            for w, ok in zip(t.circumcenters, live)]
    out["circumradii"] = [float(r) if ok else None for r, ok in zip(t.circumradii, live)]
    return out


def to_svg(t: Triangulation, margin: float = 0.05) -> str:
    """SVG drawing in a fixed ``1000 x 1000`` view box.

    One ``<line>`` per edge between finite vertices, one ``<circle>`` per
    finite face (its circumcircle) and one small ``<rect>`` per circumcenter
    (the Voronoi vertices). The drawing is scaled to the bounding box of
    the finite points; the y axis points up.
    """
    z = t.config.finite_points()
    x0, x1 = float(z.real.min()), float(z.real.max())
    y0, y1 = float(z.imag.min()), float(z.imag.max())
    span = max(x1 - x0, y1 - y0, 1e-300)
    s = VIEWBOX * (1 - 2 * margin) / span
    cx, cy = (x0 + x1) / 2, (y0 + y1) / 2

    def px(w: complex) -> tuple[float, float]:
        return (VIEWBOX / 2 + s * (w.real - cx), VIEWBOX / 2 - s * (w.imag - cy))

    pts = t.z
    inf = t.config.infinity
    lines, circles, dots = [], [], []
    for a, b in t.edges.tolist():
        if inf in (a, b):
            continue
        (xa, ya), (xb, yb) = px(pts[a]), px(pts[b])
        lines.append(f'<line x1="{xa:.3f}" y1="{ya:.3f}" x2="{xb:.3f}" y2="{yb:.3f}"/>')
    for f in range(t.n_faces):
        r = t.circumradii[f]
        if not math.isfinite(r):
            continue
        xw, yw = px(t.circumcenters[f])
        circles.append(f'<circle cx="{xw:.3f}" cy="{yw:.3f}" r="{s * r:.3f}"/>')
        dots.append(f'<rect x="{xw - 2:.3f}" y="{yw - 2:.3f}" width="4" height="4"/>')
    title = quoteattr(f"N={t.n_free} {t.config.convention}")
    return "\n".join([
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {VIEWBOX:g} {VIEWBOX:g}" '
        f'data-title={title}>',
        '<g class="circumcircles" fill="none" stroke="#999" stroke-width="1">',
        *circles, "</g>",
        '<g class="edges" stroke="#000" stroke-width="2">', *lines, "</g>",
        '<g class="centers" fill="#c00">', *dots, "</g>",
        "</svg>", ""])
