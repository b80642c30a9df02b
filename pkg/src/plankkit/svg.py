"""Deterministic SVG 1.1 drawings of planar bodies and their decorations."""
from __future__ import annotations

import numpy as np

from . import planar
from .bodies import ConvexBody
from .errors import DimensionMismatch

SIZE = 480.0
STYLE = {
    "body": 'fill="#dde6f0" stroke="#1f3b57" stroke-width="1.5"',
    "gauge": 'fill="none" stroke="#7a7a7a" stroke-width="1" stroke-dasharray="4 3"',
    "erosion": 'fill="#f3c8a8" stroke="#a4501c" stroke-width="1"',
    "plank": 'fill="#6aa84f" fill-opacity="0.25" stroke="#38761d" stroke-width="1"',
    "cell": 'fill="none" stroke="#674ea7" stroke-width="1"',
    "cut": 'stroke="#cc0000" stroke-width="1.2"',
    "site": 'fill="#674ea7"',
}


def fmt(x: float) -> str:
    """12 significant digits, no negative zero."""
    s = f"{float(x) + 0.0:.12g}"
    return "0" if s == "-0" else s


def _outline(body: ConvexBody, segments: int = 128) -> np.ndarray:
    if body.dim != 2:
        raise DimensionMismatch("only planar bodies can be drawn")
    if body.kind == "ball":
        t = 2 * np.pi * np.arange(segments) / segments
        return body.center + body.radius * np.column_stack([np.cos(t), np.sin(t)])
    return body.vertices


class Canvas:
    """Maps a world box onto a square viewport with y pointing up."""

    def __init__(self, lo, hi, size: float = SIZE, margin: float = 0.05):
        lo, hi = np.asarray(lo, float), np.asarray(hi, float)
        span = float(max(hi - lo)) or 1.0
        pad = margin * span
        self.lo = lo - pad
        self.span = span + 2 * pad
        self.size = size
        self.items: list[str] = []

    @property
    def box(self) -> np.ndarray:
        lo, hi = self.lo, self.lo + self.span
        return np.array([[lo[0], lo[1]], [hi[0], lo[1]], [hi[0], hi[1]], [lo[0], hi[1]]])

    def _pt(self, p):
        x = (p[0] - self.lo[0]) / self.span * self.size
        y = self.size - (p[1] - self.lo[1]) / self.span * self.size
        return f"{fmt(x)},{fmt(y)}"

    def polygon(self, V, layer):
        if len(V) < 2:
            return
        pts = " ".join(self._pt(p) for p in V)
        self.items.append(f'<polygon class="{layer}" points="{pts}" {STYLE[layer]}/>')

    def line(self, p, q, layer):
        (x1, y1), (x2, y2) = (self._pt(p).split(","), self._pt(q).split(","))
        self.items.append(f'<line class="{layer}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" '
                          f'{STYLE[layer]}/>')

    def dot(self, p, layer, r=2.5):
        x, y = self._pt(p).split(",")
        self.items.append(f'<circle class="{layer}" cx="{x}" cy="{y}" r="{fmt(r)}" '
                          f'{STYLE[layer]}/>')

    def render(self) -> str:
        s = fmt(self.size)
        head = ('<?xml version="1.0" encoding="UTF-8"?>\n'
                f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{s}" '
                f'height="{s}" viewBox="0 0 {s} {s}">')
        return "\n".join([head, *self.items, "</svg>"]) + "\n"


def _halfplane_clip(V, a, b):
    out = planar.clip([tuple(p) for p in np.asarray(V, float)], float(a[0]), float(a[1]), float(b))
    return np.asarray(out, float).reshape(-1, 2)


def _chord(body, H):
    """Segment of the line ``H`` inside ``body``, or ``None``."""
    p0 = H.normal * H.offset
    t = np.array([-H.normal[1], H.normal[0]])
    A, b = body.normals, body.offsets
    at, slack = A @ t, b - A @ p0
    if np.any((np.abs(at) <= 1e-15) & (slack < 0)):
        return None
    pos, neg = at > 1e-15, at < -1e-15
    hi = np.min(slack[pos] / at[pos]) if pos.any() else np.inf
    lo = np.max(slack[neg] / at[neg]) if neg.any() else -np.inf
    if not lo < hi:
        return None
    return p0 + lo * t, p0 + hi * t


def plot(body: ConvexBody, gauge: ConvexBody | None = None, erosion: ConvexBody | None = None,
         hyperplanes=(), planks=(), cells=(), sites=None) -> str:
    """SVG string with the requested layers, drawn in a fixed order."""
    V = _outline(body)
    canvas = Canvas(V.min(axis=0), V.max(axis=0))
    box = canvas.box
    for P in planks:
        Q = _halfplane_clip(_halfplane_clip(box, P.normal, P.high), -P.normal, -P.low)
        canvas.polygon(Q, "plank")
    canvas.polygon(V, "body")
    if gauge is not None:
        canvas.polygon(_outline(gauge), "gauge")
    if erosion is not None and not erosion.is_empty:
        canvas.polygon(_outline(erosion), "erosion")
    for cell in cells:
        W = cell.vertices if cell.kind != "ball" else _outline(cell)
        for a, b in zip(body.normals, body.offsets):
            W = _halfplane_clip(W, a, b)
        canvas.polygon(W, "cell")
    for H in hyperplanes:
        seg = _chord(body.as_hpoly() if body.kind != "ball" else ConvexBody.from_vertices(V), H)
        if seg is not None:
            canvas.line(*seg, "cut")
    if sites is not None:
        for p in np.asarray(sites, float):
            canvas.dot(p, "site")
    return canvas.render()
