"""SVG drawing of a point set and an optional partition."""
from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import quoteattr

from .geometry import PointSet
from .validity import partition_edges

MARGIN = 0.05


def _fill(k: int) -> str:
    hue = (k * 137.508) % 360  # golden angle keeps neighbouring faces apart
    return f"hsl({hue:.1f},65%,80%)"


def render_svg(ps: PointSet, partition: Sequence[Sequence[int]] = ()) -> bytes:
    """Faces (filled), partition edges, then points.  y grows upwards."""
    xs = [p[0] for p in ps.points]
    ys = [p[1] for p in ps.points]
    w = max(max(xs) - min(xs), 1)
    h = max(max(ys) - min(ys), 1)
    mx, my = MARGIN * w, MARGIN * h
    x0, y0 = min(xs) - mx, min(ys) - my
    vw, vh = w + 2 * mx, h + 2 * my
    top = min(ys) + max(ys)  # flip so that y points up
    r = 0.006 * max(vw, vh)
    sw = 0.002 * max(vw, vh)

    def pt(i: int) -> str:
        x, y = ps.points[i]
        return f"{x},{top - y}"

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x0:g} {y0:g} {vw:g} {vh:g}">',
    ]
    polys = [tuple(p) for p in partition]
    out.append('<g class="faces" stroke="none">')
    for k, p in enumerate(polys):
        out.append(f'<polygon class="face" points={quoteattr(" ".join(pt(i) for i in p))} '
                   f'fill="{_fill(k)}"/>')
    out.append("</g>")
    out.append(f'<g class="edges" stroke="black" stroke-width="{sw:g}">')
    for i, j in partition_edges(ps, polys):
        (ax, ay), (bx, by) = ps.points[i], ps.points[j]
        out.append(f'<line class="edge" x1="{ax}" y1="{top - ay}" x2="{bx}" y2="{top - by}"/>')
    out.append("</g>")
    out.append('<g class="points" fill="black">')
    for i, (x, y) in enumerate(ps.points):
        out.append(f'<circle class="point" cx="{x}" cy="{top - y}" r="{r:g}"><title>{i}</title></circle>')
    out.append("</g>")
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode()
