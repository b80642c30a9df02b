"""Planks, coverage decisions and the plank inequalities (Bang, Ball, two planks)."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import geometry as geo, lp
from .bodies import ConvexBody, as_direction, enumerate_vertices
from .errors import InvalidBody, NotACovering, OriginNotInterior
from .inradius import DEFAULT_TOL, ErosionProfile

EXACT_LIMIT = 16
OUTSIDE_MARGIN = 1e-9
SAMPLE_POINTS = 20000


@dataclass(frozen=True)
class Plank:
    """``{x : low <= <normal, x> <= high}``."""

    normal: np.ndarray
    low: float
    high: float

    def __post_init__(self):
        object.__setattr__(self, "normal", as_direction(self.normal))
        if not self.low <= self.high:
            raise InvalidBody(f"plank offsets out of order: {self.low} > {self.high}")
        object.__setattr__(self, "low", float(self.low))
        object.__setattr__(self, "high", float(self.high))

    @property
    def width(self) -> float:
        return self.high - self.low

    def contains(self, x, tol=0.0) -> bool:
        s = float(np.dot(self.normal, x))
        return self.low - tol <= s <= self.high + tol

    def to_dict(self):
        return {"normal": self.normal.tolist(), "low": self.low, "high": self.high}

    @classmethod
    def from_dict(cls, d):
        n = np.asarray(d["normal"], dtype=float)
        s = float(np.linalg.norm(n))
        return cls(n / s, d["low"] / s, d["high"] / s)


@dataclass
class PlankFamily:
    planks: list
    host: ConvexBody | None = None

    def __post_init__(self):
        if not self.planks:
            raise ValueError("plank family is empty")

    def __iter__(self):
        return iter(self.planks)

    def __len__(self):
        return len(self.planks)


@dataclass
class CoverageVerdict:
    covered: bool
    witness: np.ndarray | None
    method: str
    cells_checked: int

    def to_dict(self):
        return {"covered": self.covered,
                "witness": None if self.witness is None else self.witness.tolist(),
                "method": self.method, "cellsChecked": self.cells_checked}


def plank_relative_width(P: Plank, C: ConvexBody) -> float:
    return P.width / geo.width_parallel(C, P.normal)


def thicken_hyperplane(H: geo.Hyperplane, C: ConvexBody, s: float) -> Plank:
    """Union of ``p + (-s) C`` over ``p`` in ``H``: a plank of C-width ``s`` around ``H``."""
    if not geo.origin_interior(C):
        raise OriginNotInterior("the origin must lie in the interior of C")
    if s < 0:
        raise ValueError("thickness must be non-negative")
    h = geo.support_many(C, np.vstack([H.normal, -H.normal]))
    return Plank(H.normal, H.offset - s * h[0], H.offset + s * h[1])


def _outside_cell(A, b, family, signs, scale, margin):
    """Rows for ``{x in K : x strictly outside each plank on the chosen side}``."""
    rows, rhs = [A], [b]
    for P, s in zip(family, signs):
        if s < 0:
            rows.append(P.normal[None, :])
            rhs.append([P.low - margin])
        else:
            rows.append(-P.normal[None, :])
            rhs.append([-(P.high + margin)])
    return np.vstack(rows), np.concatenate(rhs)


def _feasible_point(A, b, d, scale):
    if d <= 3:
        V = enumerate_vertices(A, b, scale=scale)
        if len(V) == 0:
            return None
        return V.mean(axis=0)
    res = lp.maximize(np.zeros(d), A, b)
    return res.x if res.status == "optimal" else None


def covers_body(K: ConvexBody, family, method: str = "auto", samples: int = SAMPLE_POINTS,
                seed: int = 0) -> CoverageVerdict:
    """Does the union of the planks contain ``K``?

    Exact mode checks every one of the ``2^n`` outside-sign cells for a point
    of ``K`` beyond every plank by more than ``OUTSIDE_MARGIN``.  Sampling mode
    (``n > 16``) can only refute coverage: ``covered=True`` there means no
    uncovered sample was found.
    """
    planks = list(family)
    n = len(planks)
    method = {"exact": "cell-enumeration", "sample": "sampling"}.get(method, method)
    if method not in ("auto", "cell-enumeration", "sampling"):
        raise ValueError(f"unknown coverage method {method!r}")
    if method == "auto":
        method = "cell-enumeration" if n <= EXACT_LIMIT else "sampling"
    if method == "cell-enumeration":
        Kh = K.as_hpoly()
        A, b, d, scale = Kh.normals, Kh.offsets, K.dim, K.scale
        margin = 2 * OUTSIDE_MARGIN
        checked = 0
        for signs in itertools.product((-1, 1), repeat=n):
            checked += 1
            A2, b2 = _outside_cell(A, b, planks, signs, scale, margin)
            x = _feasible_point(A2, b2, d, scale)
            if x is not None and _outside_all(x, planks, OUTSIDE_MARGIN) and Kh.contains(x, 1e-12):
                return CoverageVerdict(False, x, method, checked)
        return CoverageVerdict(True, None, method, checked)
    rng = np.random.default_rng(seed)
    X = sample_points(K, samples, rng)
    for x in X:
        if _outside_all(x, planks, OUTSIDE_MARGIN):
            return CoverageVerdict(False, x, "sampling", samples)
    return CoverageVerdict(True, None, "sampling", samples)


def _outside_all(x, planks, margin):
    for P in planks:
        s = float(P.normal @ x)
        if P.low - margin <= s <= P.high + margin:
            return False
    return True


def sample_points(K: ConvexBody, n: int, rng) -> np.ndarray:
    """Points of ``K``: random convex combinations of vertices (balls: uniform)."""
    d = K.dim
    if K.is_ball:
        g = rng.standard_normal((n, d))
        g /= np.linalg.norm(g, axis=1)[:, None]
        rad = rng.random(n) ** (1.0 / d)
        return K.center + K.radius * g * rad[:, None]
    V = K.vertices
    w = rng.exponential(size=(n, len(V))) ** 3
    w /= w.sum(axis=1)[:, None]
    return w @ V


def _require_cover(K, family):
    v = covers_body(K, family)
    if not v.covered:
        raise NotACovering(f"planks miss the point {v.witness.tolist()}")
    return v


def bang_deficit(K: ConvexBody, family) -> float:
    """``sum w(P_i) - w(K)`` for a covering of ``K``."""
    _require_cover(K, family)
    return float(sum(P.width for P in family)) - geo.minimal_width(K).value


@dataclass
class AffineDeficit:
    deficit: float
    plank_widths: list
    body_width: float
    m: int | None = None
    successive_deficit: float | None = None
    successive_term: float | None = None

    def to_dict(self):
        return dict(self.__dict__)


def affine_deficit(K: ConvexBody, C: ConvexBody, family, m: int | None = None,
                   tol: float = DEFAULT_TOL, check: bool = True) -> AffineDeficit:
    """``sum w_C(P_i) - w_C(K)``; with ``m`` also ``sum w_C(P_i) - m r_C(K, m)``."""
    if check:
        _require_cover(K, family)
    ws = [plank_relative_width(P, C) for P in family]
    wK = geo.minimal_relative_width(K, C).value
    out = AffineDeficit(float(sum(ws)) - wK, ws, wK)
    if m is not None:
        rho = ErosionProfile(K, C).successive(m, tol).rho
        out.m = m
        out.successive_term = m * rho
        out.successive_deficit = float(sum(ws)) - m * rho
    return out


@dataclass
class TwoPlankReport:
    widths: tuple
    body_width: float
    margin: float
    violation: bool = field(default=False)

    def to_dict(self):
        return {"widths": list(self.widths), "bodyWidth": self.body_width,
                "margin": self.margin, "violation": self.violation}


def two_plank_check(K: ConvexBody, C: ConvexBody, P1: Plank, P2: Plank,
                    threshold: float = 1e-6) -> TwoPlankReport:
    _require_cover(K, [P1, P2])
    w1, w2 = plank_relative_width(P1, C), plank_relative_width(P2, C)
    wK = geo.minimal_relative_width(K, C).value
    margin = w1 + w2 - wK
    return TwoPlankReport((w1, w2), wK, margin, margin < -threshold)


def is_centrally_symmetric(K: ConvexBody, tol: float = 1e-9) -> bool:
    """``K`` equals its reflection through the centre of its vertex set."""
    if K.is_ball:
        return True
    V = K.vertices
    c = 0.5 * (V.min(axis=0) + V.max(axis=0))
    Kh = K.as_hpoly()
    reflected = 2 * c - V
    if not np.all(reflected @ Kh.normals.T <= Kh.offsets + tol * K.scale):
        return False
    h = geo.support_many(K, Kh.normals)
    h_neg = geo.support_many(K, -Kh.normals)
    return bool(np.allclose(h - Kh.normals @ c, h_neg + Kh.normals @ c, atol=tol * K.scale))
