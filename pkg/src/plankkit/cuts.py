"""Successive hyperplane cuts, arrangements and Voronoi partitions.

Also hosts the checks of the generalised Conway theorem (optimal successive
cuts) and of the successive Akopyan-Karasev inequality over inductive
partitions.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import partial
from typing import Union

import numpy as np

from . import geometry as geo
from .bodies import ConvexBody, check_same_dim, normalize
from .errors import (CutMissesRegion, DuplicateSites, EmptyIntersection, TooManyHyperplanes,
                     ViolationFound)
from .geometry import Hyperplane
from .inradius import DEFAULT_TOL, ErosionProfile
from .parallel import pmap, trial_rng

log = logging.getLogger(__name__)

MAX_ARRANGEMENT = 16
TANGENT_MARGIN = 1e-3
PROVENANCES = ("successive-cuts", "voronoi", "arrangement", "user")
CERTIFIED = ("successive-cuts", "voronoi")


class Leaf:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "LEAF"


LEAF = Leaf()


@dataclass(frozen=True)
class Cut:
    hyperplane: Hyperplane
    below: "CutTree"
    above: "CutTree"


CutTree = Union[Leaf, Cut]


def leaf_count(tree: CutTree) -> int:
    if isinstance(tree, Leaf):
        return 1
    return leaf_count(tree.below) + leaf_count(tree.above)


def cut_hyperplanes(tree: CutTree) -> list:
    if isinstance(tree, Leaf):
        return []
    return [tree.hyperplane] + cut_hyperplanes(tree.below) + cut_hyperplanes(tree.above)


@dataclass
class PartitionFamily:
    cells: list
    provenance: str
    host: ConvexBody
    dropped: list = field(default_factory=list)

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")

    @property
    def certified(self) -> bool:
        return self.provenance in CERTIFIED

    def __len__(self):
        return len(self.cells)


# ------------------------------------------------------------------ applying cuts

def support_interval(region: ConvexBody, u) -> tuple:
    h = geo.support_many(region, np.vstack([u, -u]))
    return -float(h[1]), float(h[0])


def _cuts_interior(region, H, rel=1e-9):
    lo, hi = support_interval(region, H.normal)
    margin = rel * max(hi - lo, 1e-300)
    return lo + margin < H.offset < hi - margin


def apply_cut_tree(K: ConvexBody, tree: CutTree) -> PartitionFamily:
    """Slice ``K`` along the tree; leaves become the cells (left to right)."""
    cells = []

    def walk(region, node, path):
        if isinstance(node, Leaf):
            cells.append(region)
            return
        if not _cuts_interior(region, node.hyperplane):
            raise CutMissesRegion(f"cut at node {'/'.join(path) or 'root'} misses its region",
                                  path)
        walk(geo.slice_with_halfspace(region, node.hyperplane, -1), node.below, path + ("below",))
        walk(geo.slice_with_halfspace(region, node.hyperplane, +1), node.above, path + ("above",))

    walk(K.as_hpoly(), tree, ())
    return PartitionFamily(cells, "successive-cuts", K)


def arrangement_pieces(K: ConvexBody, hyperplanes) -> PartitionFamily:
    """Cells of ``K`` cut by all hyperplanes at once (not necessarily successive)."""
    hyperplanes = list(hyperplanes)
    if len(hyperplanes) > MAX_ARRANGEMENT:
        raise TooManyHyperplanes(f"{len(hyperplanes)} > {MAX_ARRANGEMENT} hyperplanes")
    cells = [K.as_hpoly()]
    for H in hyperplanes:
        nxt = []
        for cell in cells:
            if not _cuts_interior(cell, H):
                nxt.append(cell)
                continue
            for side in (-1, 1):
                piece = geo.slice_with_halfspace(cell, H, side)
                if piece.is_full:
                    nxt.append(piece)
        cells = nxt
    return PartitionFamily(cells, "arrangement", K)


# ------------------------------------------------------------------ optimal cuts

def optimal_conway_cuts(K: ConvexBody, C: ConvexBody, n: int, m: int = 1,
                        tol: float = DEFAULT_TOL, profile: ErosionProfile | None = None) -> CutTree:
    """``n - 1`` parallel cuts minimising the greatest ``m``-th successive C-inradius.

    The cuts split the support interval of the ``rho C``-rounded body along its
    minimal-C-width direction into ``n`` equal parts, ``rho = r_C(K, mn)``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return LEAF
    prof = profile or ErosionProfile(K, C)
    rho = prof.successive(m * n, tol).rho
    _, u = prof.min_ratio(rho)
    if u is None:
        u = np.eye(K.dim)[0]
    E = prof.body(rho)
    hC = geo.support_many(prof.C, np.vstack([u, -u]))
    e_lo, e_hi = support_interval(E, u)
    lo = e_lo - rho * hC[1]
    hi = e_hi + rho * hC[0]
    step = (hi - lo) / n
    tree: CutTree = LEAF
    for k in range(1, n):
        tree = Cut(Hyperplane(u, lo + k * step), below=tree, above=LEAF)
    return tree


def greatest_piece_inradius(pieces, C: ConvexBody, m: int = 1, tol: float = DEFAULT_TOL):
    """``(max_i r_C(piece_i, m), argmax)``."""
    cells = pieces.cells if isinstance(pieces, PartitionFamily) else list(pieces)
    vals = [ErosionProfile(cell, C).successive(m, tol).rho for cell in cells]
    k = int(np.argmax(vals))
    return float(vals[k]), k


# ------------------------------------------------------------------ Voronoi

def voronoi_partition(sites, clip_box: ConvexBody) -> PartitionFamily:
    """Voronoi cells of ``sites`` clipped to ``clip_box`` (which should contain the body)."""
    S = np.atleast_2d(np.asarray(sites, dtype=float))
    if len(S) < 1:
        raise ValueError("need at least one site")
    scale = max(1.0, float(np.max(np.abs(S))))
    for i in range(len(S)):
        dist = np.linalg.norm(S[i + 1:] - S[i], axis=1)
        if np.any(dist <= 1e-12 * scale):
            raise DuplicateSites(f"site {i} is duplicated")
    box = clip_box.as_hpoly()
    cells, dropped = [], []
    sq = np.einsum("ij,ij->i", S, S)
    for i in range(len(S)):
        others = np.arange(len(S)) != i
        A = S[others] - S[i]
        b = 0.5 * (sq[others] - sq[i])
        if len(A):
            nrm = np.linalg.norm(A, axis=1)
            cell = box.with_halfspaces(A / nrm[:, None], b / nrm)
        else:
            cell = box
        if cell.is_full:
            cells.append(cell.pruned())
        else:
            dropped.append(i)
            log.info("voronoi cell %d misses the clip box", i)
    return PartitionFamily(cells, "voronoi", clip_box, dropped)


# ------------------------------------------------------------------ verifiers

@dataclass
class PartitionReport:
    m: int
    per_cell: list
    total: float
    r_body: float
    deficit: float
    cell_widths: list
    width_total: float
    width_body: float
    width_deficit: float
    dropped: list
    provenance: str
    hypothesis: str
    violation: bool

    def to_dict(self):
        return dict(self.__dict__)


def verify_partition_inequality(K: ConvexBody, C: ConvexBody, partition: PartitionFamily,
                                m: int = 1, tol: float = DEFAULT_TOL,
                                allow_uncertified: bool = False) -> PartitionReport:
    """Sum of successive C-inradii (and minimal C-widths) of the cells inside ``K``."""
    check_same_dim(K, C)
    if not partition.certified and not allow_uncertified:
        raise ValueError(f"provenance {partition.provenance!r} is not a certified inductive "
                         "family; pass allow_uncertified=True")
    pieces, dropped = [], list(partition.dropped)
    for i, cell in enumerate(partition.cells):
        piece = geo.intersect(K.as_hpoly(), cell)
        if piece.is_full:
            pieces.append(piece)
        else:
            dropped.append(i)
    if not pieces:
        raise EmptyIntersection("no cell meets the interior of the body", dropped)
    prof_K = ErosionProfile(K, C)
    r_K = prof_K.successive(m, tol).rho
    w_K = prof_K.min_ratio(0.0)[0]
    per_cell, widths = [], []
    for piece in pieces:
        prof = ErosionProfile(piece, C)
        per_cell.append(prof.successive(m, tol).rho)
        widths.append(prof.min_ratio(0.0)[0])
    total = float(sum(per_cell))
    wt = float(sum(widths))
    n = len(pieces)
    deficit = total - r_K
    wdef = wt - w_K
    violation = deficit < -(n + 1) * tol or wdef < -(n + 1) * tol
    return PartitionReport(m, per_cell, total, r_K, deficit, widths, wt, w_K, wdef, dropped,
                           partition.provenance,
                           "certified" if partition.certified else "hypothesis unverified",
                           violation)


def random_direction(rng, d):
    while True:
        u = rng.standard_normal(d)
        if np.linalg.norm(u) > 1e-9:
            return normalize(u)


class _Node:
    __slots__ = ("region", "hyperplane", "below", "above")

    def __init__(self, region):
        self.region = region
        self.hyperplane = self.below = self.above = None

    def freeze(self):
        if self.hyperplane is None:
            return LEAF
        return Cut(self.hyperplane, self.below.freeze(), self.above.freeze())


def random_cut_tree(K: ConvexBody, n: int, rng: np.random.Generator):
    """Random successive cuts: uniform piece, uniform direction, uniform offset.

    Returns ``(tree, cells)``.  Offsets keep a relative margin of
    ``TANGENT_MARGIN`` from the piece's supporting hyperplanes.
    """
    root = _Node(K.as_hpoly())
    leaves = [root]
    for _ in range(n - 1):
        node = leaves.pop(int(rng.integers(len(leaves))))
        while True:
            u = random_direction(rng, K.dim)
            lo, hi = support_interval(node.region, u)
            off = rng.uniform(lo + TANGENT_MARGIN * (hi - lo), hi - TANGENT_MARGIN * (hi - lo))
            H = Hyperplane(u, off)
            below = geo.slice_with_halfspace(node.region, H, -1)
            above = geo.slice_with_halfspace(node.region, H, +1)
            if below.is_full and above.is_full:
                break
        node.hyperplane, node.below, node.above = H, _Node(below), _Node(above)
        leaves += [node.below, node.above]
    tree = root.freeze()
    cells = []

    def collect(nd):
        if nd.hyperplane is None:
            cells.append(nd.region)
        else:
            collect(nd.below)
            collect(nd.above)

    collect(root)
    return tree, cells


@dataclass
class ConwayReport:
    n: int
    m: int
    bound: float
    trials: int
    worst_margin: float
    worst_trial: int
    worst_tree: object
    optimal_value: float
    optimal_tree: object
    attained: bool
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations and self.attained


def _conway_trial(index, K, C, n, m, seed, tol):
    rng = trial_rng(seed, index)
    tree, cells = random_cut_tree(K, n, rng)
    value, _ = greatest_piece_inradius(cells, C, m, tol)
    return value, tree


def verify_conway_theorem(K: ConvexBody, C: ConvexBody, n: int, m: int = 1, trials: int = 50,
                          seed: int = 0, tol: float = 1e-5, inner_tol: float = DEFAULT_TOL,
                          workers: int = 1, strict: bool = False) -> ConwayReport:
    """Random successive cuts never beat ``r_C(K, mn)``; the optimal cuts attain it."""
    prof = ErosionProfile(K, C)
    bound = prof.successive(m * n, inner_tol).rho
    opt_tree = optimal_conway_cuts(K, C, n, m, inner_tol, profile=prof)
    opt_cells = apply_cut_tree(K, opt_tree).cells
    opt_value, _ = greatest_piece_inradius(opt_cells, C, m, inner_tol)
    attained = abs(opt_value - bound) <= tol
    fn = partial(_conway_trial, K=K, C=C, n=n, m=m, seed=seed, tol=inner_tol)
    results = pmap(fn, range(trials), workers)
    margins = [v - bound for v, _ in results]
    worst = int(np.argmin(margins)) if margins else -1
    violations = [(i, margins[i], results[i][1]) for i in range(trials) if margins[i] < -tol]
    if not attained:
        violations.append(("optimal", opt_value - bound, opt_tree))
    report = ConwayReport(n, m, bound, trials, float(margins[worst]) if margins else 0.0, worst,
                          results[worst][1] if margins else None, opt_value, opt_tree, attained,
                          violations)
    if strict and violations:
        raise ViolationFound("generalised Conway bound violated", report)
    return report
