"""SVG overlay of a digital curve and its polygonal approximation."""

from __future__ import annotations

from xml.sax.saxutils import quoteattr

from .curve import DigitalCurve, Polygon

CURVE_COLOR = "red"
SIDE_COLOR = "blue"
VERTEX_COLOR = "green"


def render_svg(curve: DigitalCurve, polygon: Polygon | None = None, *, scale: float = 4.0,
               curve_color: str = CURVE_COLOR, side_color: str = SIDE_COLOR,
               vertex_color: str = VERTEX_COLOR, title: str | None = None) -> str:
    pts = curve.points
    xmin, ymin = pts.min(axis=0)
    xmax, ymax = pts.max(axis=0)
    pad = 2
    width = (xmax - xmin + 2 * pad) * scale
    height = (ymax - ymin + 2 * pad) * scale

    def xy(p):
        # flip to y-down screen space
        return (p[0] - xmin + pad) * scale, (ymax - p[1] + pad) * scale

    def fmt(p):
        x, y = xy(p)
        return f"{x:g},{y:g}"

    ring = list(curve.as_tuples())
    if curve.closed:
        ring.append(ring[0])
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:g}" height="{height:g}" '
        f'viewBox="0 0 {width:g} {height:g}">',
    ]
    if title:
        out.append(f"<title>{_escape(title)}</title>")
    out.append(f'<polyline class="curve" fill="none" stroke={quoteattr(curve_color)} '
               f'stroke-width="{scale / 4:g}" points="{" ".join(fmt(p) for p in ring)}"/>')
    if polygon is not None:
        verts = [curve[i] for i in polygon.vertex_indices]
        closing = verts + [verts[0]] if polygon.closed else verts
        d = "M " + " L ".join(fmt(p) for p in closing)
        out.append(f'<path class="polygon" fill="none" stroke={quoteattr(side_color)} '
                   f'stroke-width="{scale / 3:g}" d="{d}"/>')
        for p in verts:
            x, y = xy(p)
            out.append(f'<circle class="vertex" cx="{x:g}" cy="{y:g}" r="{scale * 0.6:g}" '
                       f'fill={quoteattr(vertex_color)}/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
