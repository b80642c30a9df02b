"""Planar polygon kernel: hulls, halfplane clipping, edge normals.

Polygons are numpy arrays of shape ``(k, 2)`` in counterclockwise order.
The clipping loop is plain Python because the polygons here rarely have
more than a couple dozen vertices, where numpy call overhead dominates.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import DegenerateHull

EMPTY = np.zeros((0, 2))


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def area(poly) -> float:
    """Signed area (positive for counterclockwise order)."""
    p = np.asarray(poly, dtype=float)
    if len(p) < 3:
        return 0.0
    x, y = p[:, 0], p[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def convex_hull(points, tol=1e-12, strict=True) -> np.ndarray:
    """Counterclockwise hull via the monotone chain.

    Duplicate and collinear points are dropped with tolerance
    ``tol * scale``.  With ``strict`` a zero-area hull raises
    :class:`DegenerateHull`.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        if strict:
            raise DegenerateHull("no points")
        return EMPTY
    scale = max(1.0, float(np.max(np.abs(pts))))
    eps = tol * scale
    uniq = sorted(set(map(tuple, pts.tolist())))
    if len(uniq) < 3:
        if strict:
            raise DegenerateHull("fewer than three distinct points")
        return np.array(uniq, dtype=float)

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2:
                # drop right turns and near-collinear points
                c = _cross(out[-2], out[-1], p)
                seg = math.hypot(p[0] - out[-2][0], p[1] - out[-2][1])
                if c <= eps * seg:
                    out.pop()
                else:
                    break
            out.append(p)
        return out

    lower = half(uniq)
    upper = half(reversed(uniq))
    hull = np.array(lower[:-1] + upper[:-1], dtype=float)
    if len(hull) < 3 or area(hull) <= eps * scale:
        if strict:
            raise DegenerateHull("hull has zero area")
    return hull


def clip(poly, a0, a1, b):
    """Keep the part of ``poly`` (list of tuples) with ``a0*x + a1*y <= b``."""
    n = len(poly)
    if n == 0:
        return poly
    out = []
    prev = poly[-1]
    sp = a0 * prev[0] + a1 * prev[1] - b
    for cur in poly:
        sc = a0 * cur[0] + a1 * cur[1] - b
        if sc <= 0.0:
            if sp > 0.0:
                t = sp / (sp - sc)
                out.append((prev[0] + t * (cur[0] - prev[0]), prev[1] + t * (cur[1] - prev[1])))
            out.append(cur)
        elif sp <= 0.0:
            t = sp / (sp - sc)
            out.append((prev[0] + t * (cur[0] - prev[0]), prev[1] + t * (cur[1] - prev[1])))
        prev, sp = cur, sc
    return out


def _dedupe(poly, eps):
    if len(poly) < 2:
        return poly
    out = []
    for p in poly:
        if not out or abs(p[0] - out[-1][0]) > eps or abs(p[1] - out[-1][1]) > eps:
            out.append(p)
    while len(out) > 1 and abs(out[0][0] - out[-1][0]) <= eps and abs(out[0][1] - out[-1][1]) <= eps:
        out.pop()
    return out


def box_polygon(lo, hi):
    return [(lo[0], lo[1]), (hi[0], lo[1]), (hi[0], hi[1]), (lo[0], hi[1])]


def halfplane_polygon(A, b, start, eps=0.0) -> np.ndarray:
    """Intersect the convex polygon ``start`` with ``A x <= b``.

    ``start`` must contain the answer (a bounding box is typical).  Returns
    an empty ``(0, 2)`` array if nothing survives.
    """
    poly = [tuple(p) for p in np.asarray(start, dtype=float).tolist()]
    A = np.asarray(A, dtype=float).tolist()
    b = np.asarray(b, dtype=float).tolist()
    for (a0, a1), bi in zip(A, b):
        poly = clip(poly, a0, a1, bi)
        if not poly:
            return EMPTY
    poly = _dedupe(poly, eps)
    if not poly:
        return EMPTY
    return np.array(poly, dtype=float)


def edge_halfspaces(poly):
    """Unit outward normals and offsets of the edges of a CCW polygon."""
    p = np.asarray(poly, dtype=float)
    q = np.roll(p, -1, axis=0)
    e = q - p
    n = np.stack([e[:, 1], -e[:, 0]], axis=1)
    length = np.linalg.norm(n, axis=1)
    keep = length > 0
    n = n[keep] / length[keep, None]
    off = np.einsum("ij,ij->i", n, p[keep])
    return n, off


def point_in_polygon(poly, x, tol=1e-12) -> bool:
    n, off = edge_halfspaces(poly)
    return bool(np.all(n @ np.asarray(x, dtype=float) <= off + tol))
