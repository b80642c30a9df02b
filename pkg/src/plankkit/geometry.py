"""Support functions, widths, C-inradius, erosion and slicing."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import lp, planar
from .bodies import (ConvexBody, as_direction, canonical_sign, check_same_dim, normalize)
from .errors import (DegenerateHull, EmptyResult, OriginNotInterior, RepresentationUnavailable,
                     RhoOutOfRange, UnboundedBody)

EXACT_REL_TOL = 1e-12
TIE_REL_TOL = 1e-12
DEFAULT_SAMPLES = 4096


@dataclass(frozen=True)
class Hyperplane:
    """Points ``x`` with ``<normal, x> = offset``."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        object.__setattr__(self, "normal", as_direction(self.normal))
        object.__setattr__(self, "offset", float(self.offset))

    @classmethod
    def through(cls, normal, offset):
        """Accepts a non-unit normal and rescales ``offset`` to match."""
        n = np.asarray(normal, dtype=float)
        nrm = float(np.linalg.norm(n))
        return cls(n / nrm, offset / nrm)


@dataclass(frozen=True)
class WidthResult:
    value: float
    direction: np.ndarray
    tolerance: float


# ------------------------------------------------------------------ support & width

def support_many(body: ConvexBody, D) -> np.ndarray:
    """Support values ``h_body(u)`` for each row ``u`` of ``D`` (rows need not be unit)."""
    D = np.atleast_2d(np.asarray(D, dtype=float))
    if body.is_ball:
        return D @ body.center + body.radius * np.linalg.norm(D, axis=1)
    if body.kind == "hpoly" and body.dim > 3 and "vertices" not in body.__dict__:
        return np.array([_support_lp_raw(body, u) for u in D])
    V = body.vertices
    if len(V) == 0:
        raise UnboundedBody("body has no vertices")
    return (D @ V.T).max(axis=1)


def _support_lp_raw(body, u, tol=lp.DEFAULT_TOL):
    res = lp.maximize(u, body.normals, body.offsets, tol=tol)
    if res.status == "unbounded":
        raise UnboundedBody("support LP is unbounded")
    if res.status != "optimal":
        raise EmptyResult("support LP is infeasible", certificate=(body.normals, body.offsets))
    return res.value


def support_lp(body: ConvexBody, u) -> float:
    """Support value from the halfspace form by linear programming."""
    u = as_direction(u, body.dim)
    if body.is_ball:
        return support_value(body, u)
    return _support_lp_raw(body.as_hpoly(), u)


def support_value(body: ConvexBody, u) -> float:
    """``max <x, u>`` over the body."""
    u = as_direction(u, body.dim)
    return float(support_many(body, u[None, :])[0])


def width_parallel(body: ConvexBody, u) -> float:
    """Distance between the two supporting hyperplanes with normal ``u``."""
    u = as_direction(u, body.dim)
    h = support_many(body, np.vstack([u, -u]))
    return float(max(h[0] + h[1], 0.0))


def widths_many(body: ConvexBody, D) -> np.ndarray:
    D = np.atleast_2d(D)
    if body.is_ball:
        return np.full(len(D), 2.0 * body.radius)
    if body.kind == "hpoly" and body.dim > 3 and "vertices" not in body.__dict__:
        return support_many(body, D) + support_many(body, -D)
    V = body.vertices
    P = D @ V.T
    return P.max(axis=1) - P.min(axis=1)


def relative_width_parallel(K: ConvexBody, C: ConvexBody, u) -> float:
    check_same_dim(K, C)
    return width_parallel(K, u) / width_parallel(C, u)


# ------------------------------------------------------------------ direction candidates

def _unique_dirs(D):
    D = np.asarray(D, dtype=float)
    nrm = np.linalg.norm(D, axis=1)
    D = D[nrm > 1e-12] / nrm[nrm > 1e-12, None]
    D = canonical_sign(D)
    _, first = np.unique(np.round(D, 12), axis=0, return_index=True)
    return D[np.sort(first)]


def _cross_pairs(N):
    i, j = np.triu_indices(len(N), 1)
    return np.cross(N[i], N[j])


def fan_directions(normals_K, normals_C=None, dim=2) -> np.ndarray:
    """Rays of the common refinement of the width fans.

    ``normals_K`` are facet normals of the measured body (the normal set of
    every erosion of it as well); ``normals_C`` those of the gauge, or
    ``None`` for a ball.  In the plane the rays are the normals themselves;
    in space they also include crossings ``e x f`` of edge directions.
    """
    NK = _unique_dirs(normals_K)
    NC = None if normals_C is None else _unique_dirs(normals_C)
    if dim == 2:
        return NK if NC is None else _unique_dirs(np.vstack([NK, NC]))
    if dim != 3:
        raise ValueError("exact fan directions are implemented for d <= 3")
    # arcs of the K and -K fans lie on great circles orthogonal to K's edge
    # directions, likewise for C; arc crossings are cross products of those
    EK = _unique_dirs(_cross_pairs(NK))
    parts = [NK, EK, _cross_pairs(EK)]
    if NC is not None:
        EC = _unique_dirs(_cross_pairs(NC))
        parts += [NC, EC, _cross_pairs(EC),
                  np.cross(np.repeat(EK, len(EC), axis=0), np.tile(EC, (len(EK), 1)))]
    return _unique_dirs(np.vstack(parts))


def _diameter_direction(V):
    diff = V[:, None, :] - V[None, :, :]
    k = np.argmax(np.einsum("ijk,ijk->ij", diff, diff))
    return normalize(diff.reshape(-1, V.shape[1])[k])


def _pick(values, D, tol_abs):
    """Minimum of ``values`` with lexicographic tie-break over directions."""
    vmin = float(values.min())
    cand = np.flatnonzero(values <= vmin + tol_abs)
    Dc = canonical_sign(D[cand])
    order = np.lexsort(Dc.T[::-1])
    return vmin, Dc[order[0]]


def fibonacci_sphere(n: int) -> np.ndarray:
    i = np.arange(n) + 0.5
    phi = np.arccos(1.0 - 2.0 * i / n)
    theta = math.pi * (1.0 + 5 ** 0.5) * i
    return np.stack([np.cos(theta) * np.sin(phi), np.sin(theta) * np.sin(phi), np.cos(phi)], axis=1)


def _tangent_basis(u):
    q, _ = np.linalg.qr(np.column_stack([u, np.eye(len(u))]))
    return q[:, 1:].T


def _sampled_min(ratio, dim, samples, seed=0):
    if dim == 3:
        D = fibonacci_sphere(samples)
        theta = math.sqrt(4.0 * math.pi / samples)
    else:
        rng = np.random.default_rng(seed)
        D = rng.standard_normal((samples, dim))
        D /= np.linalg.norm(D, axis=1)[:, None]
        # mean spacing of n points on S^{d-1}
        area = 2 * math.pi ** (dim / 2) / math.gamma(dim / 2)
        theta = (area / samples) ** (1.0 / (dim - 1))
    vals = ratio(D)
    best = list(np.argsort(vals)[:8])
    best_u, best_v = D[best[0]], float(vals[best[0]])
    for k in best:
        u, v, step = D[k], float(vals[k]), theta
        while step > 1e-10:
            T = _tangent_basis(u)
            trial = np.vstack([u + step * T, u - step * T])
            trial /= np.linalg.norm(trial, axis=1)[:, None]
            tv = ratio(trial)
            j = int(np.argmin(tv))
            if tv[j] < v:
                u, v = trial[j], float(tv[j])
            else:
                step *= 0.5
        if v < best_v:
            best_u, best_v = u, v
    return best_u, best_v, theta


def _lipschitz_bound(K, C, dim):
    def diam_and_wmax(body):
        if body.is_ball:
            return 2 * body.radius, 2 * body.radius
        V = body.vertices
        diff = V[:, None, :] - V[None, :, :]
        dm = float(np.sqrt(np.einsum("ijk,ijk->ij", diff, diff).max()))
        return dm, dm

    dK, wK = diam_and_wmax(K)
    dC, _ = diam_and_wmax(C)
    wCmin = cheap_min_width(C)
    return dK / wCmin + wK * dC / wCmin ** 2


def cheap_min_width(body):
    if body.is_ball:
        return 2.0 * body.radius
    lam, _ = lp.chebyshev_center(body.normals, body.offsets)
    return 2.0 * lam  # the inscribed ball bounds every width from below


def minimal_relative_width(K: ConvexBody, C: ConvexBody, method: str = "auto",
                           samples: int = DEFAULT_SAMPLES) -> WidthResult:
    """Minimum over unit ``u`` of ``w(K, u) / w(C, u)``.

    ``method="auto"`` is exact for d <= 3 (fan rays) and sampled with local
    refinement for d >= 4; ``"sample"`` forces sampling.  With ``C`` the
    unit ball the value is half the minimal width of ``K``.
    """
    d = check_same_dim(K, C)
    if method == "auto" and d <= 3:
        D = candidate_directions(K, C)
        vals = widths_many(K, D) / widths_many(C, D)
        tol = EXACT_REL_TOL * max(1.0, float(vals.min()))
        v, u = _pick(vals, D, TIE_REL_TOL * max(1.0, float(vals.min())))
        return WidthResult(v, u, tol)

    def ratio(D):
        return widths_many(K, D) / widths_many(C, D)

    u, v, theta = _sampled_min(ratio, d, samples)
    extra = [] if K.is_ball else [K.normals]
    if not C.is_ball:
        extra.append(C.normals)
    if extra:
        D = _unique_dirs(np.vstack(extra))
        vals = ratio(D)
        if vals.min() < v:
            v, u = float(vals.min()), D[int(np.argmin(vals))]
    tol = max(_lipschitz_bound(K, C, d) * theta, EXACT_REL_TOL)
    return WidthResult(float(v), canonical_sign(u[None])[0], tol)


def candidate_directions(K: ConvexBody, C: ConvexBody) -> np.ndarray:
    """Direction set on which the minimal C-width of ``K`` is attained exactly (d <= 3)."""
    d = K.dim
    if K.is_ball and C.is_ball:
        e = np.zeros(d)
        e[0] = 1.0
        return e[None, :]
    if K.is_ball:
        return _diameter_direction(C.vertices)[None, :]
    return fan_directions(K.normals, None if C.is_ball else C.normals, d)


def minimal_width(K: ConvexBody, **kw) -> WidthResult:
    """Ordinary minimal width (``C`` = unit ball)."""
    r = minimal_relative_width(K, ConvexBody.ball(np.zeros(K.dim), 1.0), **kw)
    return WidthResult(2.0 * r.value, r.direction, 2.0 * r.tolerance)


# ------------------------------------------------------------------ inradius & erosion

def c_inradius(K: ConvexBody, C: ConvexBody, tol: float = lp.DEFAULT_TOL):
    """Largest ``lam`` with ``t + lam*C`` inside ``K`` for some ``t``.

    Returns ``(lam, t)``.  Solved as the LP
    ``max lam  s.t.  <a_i, t> + lam * h_C(a_i) <= b_i``.
    """
    check_same_dim(K, C)
    if K.is_ball:
        if C.is_ball:
            lam = K.radius / C.radius
            return lam, K.center - lam * C.center
        raise RepresentationUnavailable("C-inradius of a ball needs a polytopal container")
    A, b = K.normals, K.offsets
    lam, t = lp.chebyshev_center(A, b, weights=support_many(C, A), tol=tol)
    if t is None:
        if lam == float("inf"):
            raise UnboundedBody("inradius LP unbounded")
        raise EmptyResult("inradius LP infeasible", certificate=(A, b))
    return lam, t


def origin_interior(C: ConvexBody, tol: float = 1e-12) -> bool:
    if C.is_ball:
        return float(np.linalg.norm(C.center)) < C.radius * (1 - tol)
    return bool(np.min(C.offsets) > tol * C.scale)


def require_origin_interior(C: ConvexBody):
    if not origin_interior(C):
        raise OriginNotInterior("the origin must lie in the interior of the gauge body")


def centered(C: ConvexBody) -> tuple[ConvexBody, np.ndarray]:
    """Translate ``C`` so the origin is interior; returns ``(C', shift)`` with ``C' = C + shift``.

    Widths and C-inradii are invariant under translating ``C``.
    """
    if origin_interior(C, tol=1e-6):
        return C, np.zeros(C.dim)
    if C.is_ball:
        shift = -C.center
    else:
        _, t = lp.chebyshev_center(C.normals, C.offsets)
        shift = -t
    return C.translate(shift), shift


def eroded_offsets(K: ConvexBody, C: ConvexBody, rho: float) -> np.ndarray:
    return K.offsets - rho * support_many(C, K.normals)


def erode(K: ConvexBody, C: ConvexBody, rho: float) -> ConvexBody:
    """Inner parallel body ``{t : t + rho*C inside K}``.

    Exact offset construction on the halfspace form; the result may be
    degenerate (check ``.status``).  Raises :class:`EmptyResult` if empty.
    """
    check_same_dim(K, C)
    if not rho > 0:
        raise RhoOutOfRange("rho must be positive")
    require_origin_interior(C)
    if K.is_ball:
        if not C.is_ball:
            raise RepresentationUnavailable("erosion of a ball by a polytope is not a polytope")
        r = K.radius - rho * C.radius
        if r < 0:
            raise EmptyResult("erosion of ball is empty")
        if r == 0:
            raise EmptyResult("erosion of ball is a point")
        return ConvexBody.ball(K.center - rho * C.center, r)
    Kh = K.as_hpoly()
    A = Kh.normals
    b = eroded_offsets(Kh, C, rho)
    E = ConvexBody("hpoly", K.dim, normals=A, offsets=b, hint_scale=K.scale)
    if E.status == "empty":
        raise EmptyResult(f"erosion by rho={rho!r} is empty", certificate=(A, b))
    return E


def slice_with_halfspace(K: ConvexBody, H: Hyperplane, side: int = -1) -> ConvexBody:
    """Intersect with ``<n,x> <= offset`` (``side=-1``) or ``>= offset`` (``side=+1``).

    Redundant constraints are pruned; check ``.status`` for empty or
    empty-interior results.
    """
    if side not in (-1, 1):
        raise ValueError("side must be -1 or +1")
    a = -side * H.normal
    bb = -side * H.offset
    S = K.as_hpoly().with_halfspaces(a[None, :], [bb])
    if S.status == "empty":
        return S
    return S.pruned()


def intersect(K: ConvexBody, P: ConvexBody) -> ConvexBody:
    """Intersection of two polytopes, pruned."""
    S = K.as_hpoly().with_halfspaces(P.normals, P.offsets)
    if S.status == "empty":
        return S
    return S.pruned()


def convex_hull_2d(points) -> ConvexBody:
    return ConvexBody.from_vertices(planar.convex_hull(points))


def enumerate_vertices_2d(body: ConvexBody) -> np.ndarray:
    if body.dim != 2:
        raise ValueError("planar routine")
    V = body.vertices
    if len(V) < 3 or planar.area(V) <= 0:
        raise DegenerateHull("polygon has zero area")
    return V
