"""Successive C-inradii.

``r_C(K, m)`` is the unique ``rho`` with ``w_C(K^{rho C}) = m * rho``.  The
rounded body is never built: its minimal C-width equals the minimal C-width
of the erosion ``K - rho C`` plus ``rho``, since the rounded body is the
Minkowski sum of the erosion and ``rho C``.

Two independent routes are provided.  :func:`successive_inradius` bisects
the fixed-point equation.  :func:`successive_inradius_via_packing` bisects
the linear-packing characterisation: the largest ``rho`` such that every
direction ``l`` separates a packing of ``m`` translates of ``rho C`` inside
``K``.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from . import geometry as geo
from .bodies import ConvexBody, as_direction, check_same_dim, enumerate_vertices
from .errors import NonBracketing, RepresentationUnavailable, RhoOutOfRange

DEFAULT_TOL = 1e-9
START_FRACTION = 1.0 / 1024.0


@dataclass(frozen=True)
class SuccessiveInradiusResult:
    rho: float
    m: int
    residual: float
    iterations: int
    bracket: tuple
    method: str = "fixed-point"

    def to_dict(self):
        out = asdict(self)
        out["bracket"] = list(self.bracket)
        return out


@dataclass(frozen=True)
class LinearPacking:
    """Translates ``base + shift_k * direction_vector + scale * C``."""

    base: np.ndarray
    direction_vector: np.ndarray
    shifts: tuple
    scale: float
    separating_direction: np.ndarray
    centers: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self.centers is None:
            c = self.base + np.outer(np.asarray(self.shifts), self.direction_vector)
            object.__setattr__(self, "centers", c)

    def validate(self, K: ConvexBody, C: ConvexBody, tol: float = 1e-9) -> bool:
        """Re-check containment and projection spacing from scratch."""
        A = K.normals
        b_eroded = K.offsets - self.scale * geo.support_many(C, A)
        slack = tol * K.scale
        if np.any(self.centers @ A.T > b_eroded + slack):
            return False
        l = self.separating_direction
        proj = self.centers @ l
        gap = self.scale * geo.width_parallel(C, l)
        return bool(np.all(np.diff(proj) >= gap - tol))

    def to_dict(self):
        return {"base": self.base.tolist(), "directionVector": self.direction_vector.tolist(),
                "shifts": list(self.shifts), "scale": self.scale,
                "separatingDirection": self.separating_direction.tolist()}


class ErosionProfile:
    """Erosions ``K - rho C`` of a fixed pair, sharing precomputed data.

    ``C`` is translated so the origin is interior; every quantity computed
    here is invariant under that translation.
    """

    def __init__(self, K: ConvexBody, C: ConvexBody):
        self.dim = check_same_dim(K, C)
        self.K = K
        self.C, self.shift = geo.centered(C)
        self.r, self.witness = geo.c_inradius(K, self.C)
        self.scale = K.scale
        self._balls = K.is_ball
        if self._balls:
            if not C.is_ball:
                raise RepresentationUnavailable("ball body needs a ball gauge")
            return
        Kh = K.as_hpoly()
        self.A = np.asarray(Kh.normals)
        self.b = np.asarray(Kh.offsets)
        self.hA = geo.support_many(self.C, self.A)
        self.exact = self.dim <= 3
        if self.exact:
            self.dirs = geo.candidate_directions(Kh, self.C)
            self.wC = geo.widths_many(self.C, self.dirs)

    # erosion geometry -----------------------------------------------------------
    def offsets(self, rho):
        return self.b - rho * self.hA

    def vertices(self, rho):
        return enumerate_vertices(self.A, self.offsets(rho), scale=self.scale)

    def body(self, rho) -> ConvexBody:
        if self._balls:
            return ConvexBody.ball(self.K.center - rho * self.C.center,
                                   self.K.radius - rho * self.C.radius)
        return ConvexBody("hpoly", self.dim, normals=self.A, offsets=self.offsets(rho),
                          hint_scale=self.scale)

    def _widths(self, V, D):
        P = D @ V.T
        return P.max(axis=1) - P.min(axis=1)

    def min_ratio(self, rho):
        """``(w_C(K - rho C), direction)``; 0 for empty or flat erosions."""
        if self._balls:
            return max(self.K.radius - rho * self.C.radius, 0.0) / self.C.radius, None
        if not self.exact:
            E = self.body(rho)
            if E.status != "full":
                return 0.0, None
            res = geo.minimal_relative_width(E, self.C)
            return res.value, res.direction
        V = self.vertices(rho)
        if len(V) <= self.dim:
            return 0.0, None
        vals = self._widths(V, self.dirs) / self.wC
        v, u = geo._pick(vals, self.dirs, geo.TIE_REL_TOL * max(1.0, float(vals.min())))
        return v, u

    def rounded_width(self, rho):
        return self.min_ratio(rho)[0] + rho

    def packing_slack(self, rho, m, dirs=None):
        """``min_l [w(E, l) - (m-1) rho w(C, l)]``, ``-inf`` if the erosion is empty."""
        if self._balls:
            wE = 2.0 * (self.K.radius - rho * self.C.radius)
            return wE - (m - 1) * rho * 2.0 * self.C.radius if wE >= 0 else float("-inf")
        V = self.vertices(rho)
        if len(V) == 0:
            return float("-inf")
        if dirs is None and not self.exact:
            def slack(D):
                return self._widths(V, D) - (m - 1) * rho * geo.widths_many(self.C, D)
            _, v, _ = geo._sampled_min(slack, self.dim, geo.DEFAULT_SAMPLES)
            return v
        D = self.dirs if dirs is None else dirs
        wC = self.wC if dirs is None else geo.widths_many(self.C, D)
        return float(np.min(self._widths(V, D) - (m - 1) * rho * wC))

    # successive inradii -----------------------------------------------------------
    def successive(self, m: int, tol: float = DEFAULT_TOL) -> SuccessiveInradiusResult:
        if m < 1:
            raise ValueError("m must be a positive integer")
        r = self.r

        def f(rho):
            return self.rounded_width(rho) - m * rho

        if m == 1:
            # f > 0 exactly while the erosion keeps an interior, so bisecting from
            # the width bound gives an LP-free value of the C-inradius
            hi = self.min_ratio(0.0)[0] * (1 + 1e-9)
        else:
            hi = r
            if f(hi) > 0:
                raise NonBracketing(f"f(r) = {f(hi)!r} > 0 for m={m}")
        lo = r * START_FRACTION
        it = 0
        while f(lo) <= 0:
            lo *= START_FRACTION
            it += 1
            if it > 8:
                raise NonBracketing("no positive value of f near 0")
        width_tol = tol * max(1.0, r)
        while hi - lo > width_tol:
            mid = 0.5 * (lo + hi)
            if f(mid) > 0:
                lo = mid
            else:
                hi = mid
            it += 1
        rho = 0.5 * (lo + hi)
        return SuccessiveInradiusResult(rho, m, abs(f(rho)), it, (lo, hi))

    def successive_via_packing(self, m: int, tol: float = DEFAULT_TOL) -> float:
        r = self.r
        if m == 1 or self.packing_slack(r, m) >= 0:
            return r
        lo = r * START_FRACTION
        it = 0
        while self.packing_slack(lo, m) < 0:
            lo *= START_FRACTION
            it += 1
            if it > 8:
                raise NonBracketing("packing condition fails near 0")
        hi = r
        width_tol = tol * max(1.0, r)
        while hi - lo > width_tol:
            mid = 0.5 * (lo + hi)
            if self.packing_slack(mid, m) >= 0:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)


def rounded_relative_width(K: ConvexBody, C: ConvexBody, rho: float) -> float:
    """Minimal C-width of the rho C-rounded body of ``K``."""
    prof = ErosionProfile(K, C)
    if not 0 < rho <= prof.r * (1 + 1e-9):
        raise RhoOutOfRange(f"rho={rho!r} outside (0, {prof.r!r}]")
    return prof.rounded_width(min(rho, prof.r))


def successive_inradius(K: ConvexBody, C: ConvexBody, m: int = 1,
                        tol: float = DEFAULT_TOL) -> SuccessiveInradiusResult:
    """The ``m``-th successive C-inradius by bisection on the fixed-point equation."""
    return ErosionProfile(K, C).successive(m, tol)


def successive_inradius_via_packing(K: ConvexBody, C: ConvexBody, m: int = 1,
                                    tol: float = DEFAULT_TOL) -> float:
    return ErosionProfile(K, C).successive_via_packing(m, tol)


def packing_feasible(K: ConvexBody, C: ConvexBody, m: int, rho: float, l):
    """Is there a packing of ``m`` translates of ``rho C`` in ``K`` separated by ``l``?

    Returns ``(feasible, witness)``.  The witness places centres at equal
    spacing between the erosion's extreme points along ``l``.
    """
    geo.require_origin_interior(C)
    l = as_direction(l, K.dim)
    if not rho > 0:
        raise RhoOutOfRange("rho must be positive")
    prof = ErosionProfile(K, C)
    if prof._balls:
        E = prof.body(rho)
        if E.radius < 0:
            raise RhoOutOfRange("erosion is empty")
        lo_pt, hi_pt = E.center - E.radius * l, E.center + E.radius * l
    else:
        V = prof.vertices(rho)
        if len(V) == 0:
            raise RhoOutOfRange(f"erosion by rho={rho!r} is empty")
        proj = V @ l
        lo_pt, hi_pt = V[int(np.argmin(proj))], V[int(np.argmax(proj))]
    wE = float((hi_pt - lo_pt) @ l)
    wC = geo.width_parallel(C, l)
    feasible = wE >= (m - 1) * rho * wC - 1e-9
    if not feasible:
        return False, None
    if m == 1:
        return True, LinearPacking(lo_pt, l.copy(), (0.0,), rho, l)
    v = hi_pt - lo_pt
    if np.linalg.norm(v) == 0:
        v = l.copy()
    shifts = tuple(k / (m - 1) for k in range(m))
    return True, LinearPacking(lo_pt, v, shifts, rho, l)


def inradius_sequence(K: ConvexBody, C: ConvexBody, m_max: int, tol: float = DEFAULT_TOL):
    """``[(m, r_C(K, m), m * r_C(K, m)) for m = 1..m_max]``."""
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    prof = ErosionProfile(K, C)
    out = []
    for m in range(1, m_max + 1):
        rho = prof.successive(m, tol).rho
        out.append((m, rho, m * rho))
    return out
