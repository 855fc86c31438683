"""Deterministic SVG pictures of 2D bodies, their cuts and closures.

Screen coordinates are rounded to a fixed precision; the exact data behind
every element rides along in a ``data-exact`` attribute.
"""
from __future__ import annotations

import json
import math
from fractions import Fraction
from xml.sax.saxutils import quoteattr

from . import geometry as geo
from .body import Ball, Ellipse2D, PolytopeBody, as_body
from .errors import NotPlottable
from .numeric import to_float, vector_to_json

SCALE = 100
PRECISION = 3
ELLIPSE_SEGMENTS = 96


def _fmt(x: float) -> str:
    s = f"{x:.{PRECISION}f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def polygon_order(P: geo.Polytope):
    """Vertices of a polygon in counterclockwise order (segments and points as given)."""
    verts = list(P.vertices)
    if P.dim < 2:
        return verts
    pts = [tuple(to_float(x) for x in v) for v in verts]
    cx = sum(p[0] for p in pts) / len(pts)
    cy = sum(p[1] for p in pts) / len(pts)
    order = sorted(range(len(verts)), key=lambda i: math.atan2(pts[i][1] - cy, pts[i][0] - cx))
    return [verts[i] for i in order]


def _ellipse_points(K, k):
    (a, b), (_, d) = (tuple(float(x) for x in row) for row in K.shape)
    # S = L L^T, boundary = center + L u for unit u
    l11 = math.sqrt(a)
    l21 = b / l11
    l22 = math.sqrt(d - l21 * l21)
    cx, cy = (float(x) for x in K.center)
    out = []
    for i in range(k):
        t = 2 * math.pi * i / k
        u, v = math.cos(t), math.sin(t)
        out.append((cx + l11 * u, cy + l21 * u + l22 * v))
    return out


def _outline(K):
    """Outline points (floats) and the exact description for annotation."""
    if isinstance(K, PolytopeBody):
        P = K.polytope
        pts = polygon_order(P) if P.dim == 2 else list(P.vertices)
        exact = {"vertices": [vector_to_json(v) for v in pts]}
        return [tuple(to_float(x) for x in v) for v in pts], exact
    if isinstance(K, Ball):
        pts = _ellipse_points(K, ELLIPSE_SEGMENTS)
        return pts, {"ball": {"center": [str(x) for x in K.center], "radius": str(K.radius)}}
    if isinstance(K, Ellipse2D):
        pts = _ellipse_points(K, ELLIPSE_SEGMENTS)
        return pts, {"ellipse": {"center": [str(x) for x in K.center],
                                 "shape": [[str(x) for x in row] for row in K.shape]}}
    raise NotPlottable(f"cannot draw {type(K).__name__}")


def _clip_line(c, rhs, box):
    """Endpoints of c.x = rhs inside box = (x0, y0, x1, y1), or None."""
    a, b = (float(x) for x in c)
    r = float(rhs)
    x0, y0, x1, y1 = box
    pts = []
    if b != 0:
        for x in (x0, x1):
            y = (r - a * x) / b
            if y0 - 1e-12 <= y <= y1 + 1e-12:
                pts.append((x, y))
    if a != 0:
        for y in (y0, y1):
            x = (r - b * y) / a
            if x0 - 1e-12 <= x <= x1 + 1e-12:
                pts.append((x, y))
    pts = sorted(set((round(x, 9), round(y, 9)) for x, y in pts))
    if len(pts) < 2:
        return None
    return pts[0], pts[-1]


def plot2d(body, cuts=(), closure=None, title: str | None = None) -> str:
    """SVG text: body outline, one line per cut, the closure shaded (or noted empty)."""
    K = as_body(body)
    if K.n != 2:
        raise NotPlottable(f"plots need dimension 2, got {K.n}")
    outline, exact_body = _outline(K)
    xs = [p[0] for p in outline]
    ys = [p[1] for p in outline]
    box = (min(xs) - 1, min(ys) - 1, max(xs) + 1, max(ys) + 1)
    w, h = (box[2] - box[0]) * SCALE, (box[3] - box[1]) * SCALE

    def sx(x):
        return _fmt((x - box[0]) * SCALE)

    def sy(y):
        return _fmt((box[3] - y) * SCALE)

    def points(pts):
        return " ".join(f"{sx(x)},{sy(y)}" for x, y in pts)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(w)}" height="{_fmt(h)}" '
           f'viewBox="0 0 {_fmt(w)} {_fmt(h)}">']
    if title:
        out.append(f"<title>{title}</title>")
    out.append(f'<rect class="background" x="0" y="0" width="{_fmt(w)}" height="{_fmt(h)}" fill="white"/>')
    if closure is not None and not closure.is_empty:
        cpts = polygon_order(closure) if closure.dim == 2 else list(closure.vertices)
        ann = json.dumps({"vertices": [vector_to_json(v) for v in cpts]}, sort_keys=True)
        fl = [tuple(to_float(x) for x in v) for v in cpts]
        out.append(f'<polygon class="closure" points="{points(fl)}" fill="#8fbcd4" '
                   f'fill-opacity="0.6" stroke="#2b6a8a" stroke-width="2" data-exact={quoteattr(ann)}/>')
    else:
        out.append(f'<text class="note" x="{_fmt(10)}" y="{_fmt(20)}" font-size="14">closure empty</text>'
                   if closure is not None else "")
    out.append(f'<polygon class="body" points="{points(outline)}" fill="none" stroke="black" '
               f'stroke-width="2" data-exact={quoteattr(json.dumps(exact_body, sort_keys=True))}/>')
    for cut in sorted(cuts, key=lambda c: (tuple(c.c), Fraction(c.rhs))):
        ann = json.dumps({"c": list(cut.c), "rhs": str(cut.rhs)}, sort_keys=True)
        seg = _clip_line(cut.c, cut.rhs, box)
        if seg is None:
            out.append(f'<line class="cut" x1="0" y1="0" x2="0" y2="0" visibility="hidden" '
                       f'data-exact={quoteattr(ann)}/>')
            continue
        (x1, y1), (x2, y2) = seg
        out.append(f'<line class="cut" x1="{sx(x1)}" y1="{sy(y1)}" x2="{sx(x2)}" y2="{sy(y2)}" '
                   f'stroke="#c0392b" stroke-width="1" stroke-dasharray="4 3" data-exact={quoteattr(ann)}/>')
    out.append("</svg>")
    return "\n".join(line for line in out if line) + "\n"
