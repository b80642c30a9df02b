"""Convex body representations.

A :class:`ConvexBody` is one of

* ``hpoly``: ``{x : normals @ x <= offsets}`` with unit normals (canonical),
* ``vpoly``: convex hull of a point list,
* ``ball``: Euclidean ball.

Polytopes in dimensions 2 and 3 carry their vertex list; halfspace and vertex
forms convert into each other lazily.  Instances are immutable.
"""
from __future__ import annotations

import itertools
from functools import cached_property

import numpy as np
from scipy.spatial import ConvexHull, HalfspaceIntersection, QhullError

from . import lp, planar
from .errors import (DegenerateHull, DimensionMismatch, InvalidBody, InvalidDirection,
                     RepresentationUnavailable, UnboundedBody)

FEAS_TOL = 1e-12
MAX_DIM = 8


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def as_direction(u, dim=None, tol=1e-9) -> np.ndarray:
    """Validate a unit direction; the norm may deviate by at most ``tol``."""
    u = np.asarray(u, dtype=float).ravel()
    if dim is not None and u.size != dim:
        raise DimensionMismatch(f"direction has {u.size} components, expected {dim}")
    nrm = float(np.linalg.norm(u))
    if not np.isfinite(nrm) or abs(nrm - 1.0) > tol:
        raise InvalidDirection(f"direction norm {nrm!r} is not 1")
    return u


def normalize(u) -> np.ndarray:
    u = np.asarray(u, dtype=float).ravel()
    nrm = float(np.linalg.norm(u))
    if nrm == 0.0 or not np.isfinite(nrm):
        raise InvalidDirection("zero or non-finite vector")
    return u / nrm


def canonical_sign(D, tol=1e-12):
    """Flip rows so the first component with ``|x| > tol`` is positive."""
    D = np.array(D, dtype=float, copy=True)
    for row in D:
        nz = np.flatnonzero(np.abs(row) > tol)
        if nz.size and row[nz[0]] < 0:
            row *= -1.0
    return D + 0.0  # fold negative zeros


# ---------------------------------------------------------------- vertex enumeration

def _vertices_2d(A, b, eps):
    n = len(A)
    if n < 3:
        return planar.EMPTY
    i, j = np.triu_indices(n, 1)
    a1, a2 = A[i], A[j]
    det = a1[:, 0] * a2[:, 1] - a1[:, 1] * a2[:, 0]
    ok = np.abs(det) > 1e-14
    if not ok.any():
        return planar.EMPTY
    a1, a2, det = a1[ok], a2[ok], det[ok]
    b1, b2 = b[i][ok], b[j][ok]
    x = (b1 * a2[:, 1] - b2 * a1[:, 1]) / det
    y = (a1[:, 0] * b2 - a2[:, 0] * b1) / det
    P = np.stack([x, y], axis=1)
    feas = np.all(P @ A.T <= b + eps, axis=1)
    P = P[feas]
    if len(P) == 0:
        return planar.EMPTY
    return planar.convex_hull(P, tol=1e-12, strict=False)


def _vertices_3d(A, b, eps):
    n = len(A)
    if n < 4:
        return np.zeros((0, 3))
    idx = np.array(list(itertools.combinations(range(n), 3)))
    M = A[idx]
    det = np.linalg.det(M)
    ok = np.abs(det) > 1e-12
    if not ok.any():
        return np.zeros((0, 3))
    P = np.linalg.solve(M[ok], b[idx[ok]][..., None])[..., 0]
    feas = np.all(P @ A.T <= b + eps, axis=1)
    P = P[feas]
    if len(P) == 0:
        return np.zeros((0, 3))
    key = np.round(P / max(eps, 1e-300) / 10.0)
    _, first = np.unique(key, axis=0, return_index=True)
    return P[np.sort(first)]


def _vertices_qhull(A, b):
    lam, t = lp.chebyshev_center(A, b)
    if t is None or lam <= 0:
        return np.zeros((0, A.shape[1]))
    try:
        hs = HalfspaceIntersection(np.hstack([A, -b[:, None]]), t)
    except QhullError:
        return np.zeros((0, A.shape[1]))
    P = hs.intersections
    _, first = np.unique(np.round(P, 10), axis=0, return_index=True)
    return P[np.sort(first)]


def enumerate_vertices(A, b, scale=None) -> np.ndarray:
    """Vertices of the bounded polyhedron ``A x <= b`` (empty array if none)."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    d = A.shape[1]
    if scale is None:
        scale = 1.0 + float(np.max(np.abs(b))) if b.size else 1.0
    eps = FEAS_TOL * scale
    if d == 2:
        return _vertices_2d(A, b, eps)
    if d == 3:
        return _vertices_3d(A, b, eps)
    return _vertices_qhull(A, b)


def affine_rank(P, tol) -> int:
    P = np.asarray(P, dtype=float)
    if len(P) <= 1:
        return 0
    s = np.linalg.svd(P - P.mean(axis=0), compute_uv=False)
    return int(np.sum(s > tol))


def _positively_spanning(A, d):
    """True iff ``A x <= b`` is bounded for every ``b``."""
    if d == 2:
        ang = np.sort(np.arctan2(A[:, 1], A[:, 0]))
        gaps = np.diff(np.concatenate([ang, [ang[0] + 2 * np.pi]]))
        return bool(gaps.max() < np.pi - 1e-12)
    # bounded iff max +-e_k . x stays finite over the recession cone {A x <= 0}
    box = [(-1.0, 1.0)] * d
    for k in range(d):
        for s in (1.0, -1.0):
            c = np.zeros(d)
            c[k] = s
            res = lp.maximize(c, A, np.zeros(len(A)), bounds=box)
            if res.status != "optimal" or res.value > 1e-9:
                return False
    return True


# ---------------------------------------------------------------- the body type

class ConvexBody:
    """Immutable convex body.  Build with the ``from_*``/``ball``/``box`` constructors."""

    def __init__(self, kind, dim, normals=None, offsets=None, vertices=None,
                 center=None, radius=None, hint_scale=None):
        self.kind = kind
        self.dim = int(dim)
        self._normals = None if normals is None else _frozen(normals)
        self._offsets = None if offsets is None else _frozen(offsets)
        self._vertices = None if vertices is None else _frozen(vertices)
        self.center = None if center is None else _frozen(center)
        self.radius = None if radius is None else float(radius)
        self._hint_scale = hint_scale

    # constructors ----------------------------------------------------------
    @classmethod
    def from_halfspaces(cls, normals, offsets, validate=True, hint_scale=None):
        """Body ``{x : <a_i, x> <= b_i}``; normals are rescaled to unit length."""
        A = np.atleast_2d(np.asarray(normals, dtype=float))
        b = np.asarray(offsets, dtype=float).ravel()
        if A.shape[0] != b.size:
            raise InvalidBody("normals and offsets differ in length")
        d = A.shape[1]
        if not 2 <= d <= MAX_DIM:
            raise InvalidBody(f"dimension {d} outside [2, {MAX_DIM}]")
        nrm = np.linalg.norm(A, axis=1)
        if np.any(nrm == 0) or not np.all(np.isfinite(A)) or not np.all(np.isfinite(b)):
            raise InvalidBody("zero or non-finite normal")
        A = A / nrm[:, None]
        b = b / nrm
        body = cls("hpoly", d, normals=A, offsets=b, hint_scale=hint_scale)
        if validate:
            body._validate_hpoly()
        return body

    @classmethod
    def from_vertices(cls, points):
        P = np.atleast_2d(np.asarray(points, dtype=float))
        d = P.shape[1]
        if len(P) == 0:
            raise InvalidBody("empty vertex list")
        if not 2 <= d <= MAX_DIM:
            raise InvalidBody(f"dimension {d} outside [2, {MAX_DIM}]")
        if not np.all(np.isfinite(P)):
            raise InvalidBody("non-finite vertex")
        if d == 2:
            P = planar.convex_hull(P)
        else:
            scale = max(1.0, float(np.max(np.abs(P))))
            if affine_rank(P, 1e-12 * scale) < d:
                raise DegenerateHull("points are affinely dependent")
            try:
                hull = ConvexHull(P)
            except QhullError as exc:
                raise DegenerateHull(str(exc)) from None
            P = P[hull.vertices]
        return cls("vpoly", d, vertices=P)

    @classmethod
    def ball(cls, center, radius):
        c = np.asarray(center, dtype=float).ravel()
        if not 2 <= c.size <= MAX_DIM:
            raise InvalidBody(f"dimension {c.size} outside [2, {MAX_DIM}]")
        if not radius > 0 or not np.isfinite(radius):
            raise InvalidBody("ball radius must be positive")
        return cls("ball", c.size, center=c, radius=radius)

    @classmethod
    def box(cls, lo, hi):
        lo = np.asarray(lo, dtype=float).ravel()
        hi = np.asarray(hi, dtype=float).ravel()
        d = lo.size
        eye = np.eye(d)
        return cls.from_halfspaces(np.vstack([eye, -eye]), np.concatenate([hi, -lo]))

    # validation --------------------------------------------------------------
    def _validate_hpoly(self):
        A, d = self._normals, self.dim
        if len(A) < d + 1 or not _positively_spanning(A, d):
            raise UnboundedBody("halfspace system is unbounded")
        if self.status != "full":
            raise DegenerateHull(f"halfspace system is {self.status}")

    # representations ---------------------------------------------------------
    @property
    def is_ball(self) -> bool:
        return self.kind == "ball"

    @cached_property
    def _hrep(self):
        if self.kind == "hpoly":
            return self._normals, self._offsets
        if self.kind == "ball":
            raise RepresentationUnavailable("a ball has no halfspace representation")
        V = self._vertices
        if self.dim == 2:
            return planar.edge_halfspaces(V)
        hull = ConvexHull(V)
        eq = hull.equations
        n = eq[:, :-1]
        nrm = np.linalg.norm(n, axis=1)
        A, b = n / nrm[:, None], -eq[:, -1] / nrm
        _, first = np.unique(np.round(np.hstack([A, b[:, None]]), 12), axis=0, return_index=True)
        first = np.sort(first)
        return A[first], b[first]

    @property
    def normals(self) -> np.ndarray:
        return self._hrep[0]

    @property
    def offsets(self) -> np.ndarray:
        return self._hrep[1]

    @cached_property
    def vertices(self) -> np.ndarray:
        if self._vertices is not None:
            return self._vertices
        if self.kind == "ball":
            raise RepresentationUnavailable("a ball has no vertex list")
        return _frozen(enumerate_vertices(self._normals, self._offsets, scale=self._scale_guess))

    @property
    def _scale_guess(self):
        if self._hint_scale is not None:
            return self._hint_scale
        return 1.0 + float(np.max(np.abs(self._offsets)))

    @cached_property
    def status(self) -> str:
        """``"full"``, ``"degenerate"`` (empty interior) or ``"empty"``."""
        if self.kind != "hpoly":
            return "full"
        if self.dim <= 3:
            V = self.vertices
            if len(V) == 0:
                return "empty"
            tol = 1e-10 * self._scale_guess
            if affine_rank(V, tol) < self.dim:
                return "degenerate"
            if self.dim == 2 and planar.area(V) <= tol * self._scale_guess:
                return "degenerate"
            return "full"
        lam, _ = lp.chebyshev_center(self._normals, self._offsets)
        if lam == float("-inf") or lam < -1e-12 * self._scale_guess:
            return "empty"
        return "full" if lam > 1e-10 * self._scale_guess else "degenerate"

    @property
    def is_full(self) -> bool:
        return self.status == "full"

    @property
    def is_empty(self) -> bool:
        return self.status == "empty"

    @cached_property
    def scale(self) -> float:
        """Largest absolute coordinate (at least 1), used to scale tolerances."""
        if self.kind == "ball":
            return max(1.0, float(np.max(np.abs(self.center))) + self.radius)
        if self.dim <= 3 or self.kind == "vpoly":
            V = self.vertices
            if len(V):
                return max(1.0, float(np.max(np.abs(V))))
        return max(1.0, float(np.max(np.abs(self._offsets))))

    def pruned(self) -> "ConvexBody":
        """Copy with redundant halfspaces removed (polytopes only)."""
        if self.kind != "hpoly":
            return self
        A, b = self._normals, self._offsets
        if self.status == "empty":
            return self
        keep = redundancy_mask(A, b, self.vertices if self.dim <= 3 else None,
                               tol=1e-9 * self.scale)
        return ConvexBody("hpoly", self.dim, normals=A[keep], offsets=b[keep],
                          vertices=self.vertices if self.dim <= 3 else None,
                          hint_scale=self._hint_scale)

    def with_halfspaces(self, A_new, b_new) -> "ConvexBody":
        """Intersection with extra halfspaces (unit normals assumed), unvalidated."""
        A = np.vstack([self.normals, np.atleast_2d(A_new)])
        b = np.concatenate([self.offsets, np.atleast_1d(b_new)])
        return ConvexBody("hpoly", self.dim, normals=A, offsets=b, hint_scale=self.scale)

    # affine images -----------------------------------------------------------
    def translate(self, t) -> "ConvexBody":
        t = np.asarray(t, dtype=float).ravel()
        if t.size != self.dim:
            raise DimensionMismatch("translation dimension")
        if self.kind == "ball":
            return ConvexBody.ball(self.center + t, self.radius)
        if self.kind == "vpoly":
            return ConvexBody("vpoly", self.dim, vertices=self._vertices + t)
        V = self.__dict__.get("vertices")
        return ConvexBody("hpoly", self.dim, normals=self._normals,
                          offsets=self._offsets + self._normals @ t,
                          vertices=None if V is None else V + t)

    def scaled(self, lam: float) -> "ConvexBody":
        """Homothetic image ``lam * body`` for ``lam > 0``."""
        if not lam > 0:
            raise InvalidBody("scale factor must be positive")
        if self.kind == "ball":
            return ConvexBody.ball(self.center * lam, self.radius * lam)
        if self.kind == "vpoly":
            return ConvexBody("vpoly", self.dim, vertices=self._vertices * lam)
        V = self.__dict__.get("vertices")
        return ConvexBody("hpoly", self.dim, normals=self._normals, offsets=self._offsets * lam,
                          vertices=None if V is None else V * lam)

    def as_hpoly(self) -> "ConvexBody":
        if self.kind == "hpoly":
            return self
        A, b = self._hrep
        return ConvexBody("hpoly", self.dim, normals=A, offsets=b, vertices=self.vertices)

    def contains(self, x, tol=1e-9) -> bool:
        x = np.asarray(x, dtype=float)
        if self.kind == "ball":
            return bool(np.linalg.norm(x - self.center) <= self.radius + tol)
        return bool(np.all(self.normals @ x <= self.offsets + tol * self.scale))

    def __repr__(self):
        if self.kind == "ball":
            return f"ConvexBody.ball({self.center.tolist()}, {self.radius})"
        if self.kind == "vpoly":
            return f"ConvexBody(vpoly, d={self.dim}, {len(self._vertices)} vertices)"
        return f"ConvexBody(hpoly, d={self.dim}, {len(self._normals)} halfspaces)"


def redundancy_mask(A, b, vertices=None, tol=1e-9):
    """Boolean mask of halfspaces that support a facet."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    n, d = A.shape
    if vertices is not None and len(vertices):
        V = np.asarray(vertices)
        tight = np.abs(V @ A.T - b) <= tol
        keep = np.zeros(n, dtype=bool)
        for i in range(n):
            Vi = V[tight[:, i]]
            if len(Vi) >= d and affine_rank(Vi, tol) >= d - 1:
                keep[i] = True
        # identical rows: keep the first
        for i in np.flatnonzero(keep):
            dup = np.flatnonzero(keep[i + 1:] & (np.abs(A[i + 1:] - A[i]).max(axis=1) < 1e-12)
                                 & (np.abs(b[i + 1:] - b[i]) < tol)) + i + 1
            keep[dup] = False
        return keep
    keep = np.ones(n, dtype=bool)
    for i in range(n):
        others = keep.copy()
        others[i] = False
        if not others.any():
            continue
        Ai = np.vstack([A[others], A[i]])
        bi = np.concatenate([b[others], [b[i] + 1.0]])
        res = lp.maximize(A[i], Ai, bi)
        if res.status == "optimal" and res.value <= b[i] + tol:
            keep[i] = False
    return keep


def check_same_dim(*bodies):
    dims = {body.dim for body in bodies}
    if len(dims) != 1:
        raise DimensionMismatch(f"bodies have dimensions {sorted(dims)}")
    return dims.pop()
