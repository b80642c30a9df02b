"""Seeded instance generators and batch probes of the open plank conjectures.

A probe never proves anything.  Reports say "no counterexample found" with
the instance distribution pinned by the config, or list violations together
with instances that can be re-evaluated from their serialisation alone.
"""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field, fields
from functools import partial

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from . import cuts, formats, geometry as geo, lp, planar
from .bodies import ConvexBody, normalize
from .errors import GenerationFailed, GeometryError
from .geometry import Hyperplane
from .inradius import ErosionProfile
from .parallel import pmap
from .planks import Plank, affine_deficit, bang_deficit, covers_body, is_centrally_symmetric

TARGETS = ("affine-plank", "successive-plank", "cut-conjecture", "partition-problem",
           "covering-problem")
GAUGES = ("self", "ball", "random", "symmetric")
MAX_RETRIES = 100
MIN_INRADIUS = 1e-2


# ------------------------------------------------------------------ generators

def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _unit_ball_points(rng, k, d):
    g = rng.standard_normal((k, d))
    g /= np.linalg.norm(g, axis=1)[:, None]
    return g * (rng.random(k) ** (1.0 / d))[:, None]


def _hull_body(P):
    d = P.shape[1]
    if d == 2:
        V = planar.convex_hull(P)
        A, b = planar.edge_halfspaces(V)
        return ConvexBody("hpoly", 2, normals=A, offsets=b, vertices=V)
    hull = ConvexHull(P)
    return ConvexBody.from_vertices(P[hull.vertices]).as_hpoly()


def _acceptable(body):
    lam, _ = lp.chebyshev_center(body.normals, body.offsets)
    return lam >= MIN_INRADIUS


def random_body(seed, d: int = 2, k: int = 6, symmetric: bool = False) -> ConvexBody:
    """Convex hull of ``k`` uniform points of the unit ball (``+-`` pairs if symmetric).

    Bodies whose Euclidean inradius is below ``MIN_INRADIUS`` are resampled.
    """
    if k < d + 1 and not symmetric:
        raise ValueError("need k >= d + 1 points")
    rng = _rng(seed)
    for _ in range(MAX_RETRIES):
        P = _unit_ball_points(rng, k, d)
        if symmetric:
            P = np.vstack([P, -P])
        try:
            body = _hull_body(P)
        except (QhullError, GeometryError, ValueError):  # degenerate sample
            continue
        if _acceptable(body):
            return body
    raise GenerationFailed(f"no full-dimensional body after {MAX_RETRIES} draws")


def random_unit_vector(rng, d):
    return cuts.random_direction(rng, d)


def _rotate(u, rng, max_angle):
    d = len(u)
    w = rng.standard_normal(d)
    w -= (w @ u) * u
    w = normalize(w)
    a = rng.uniform(-max_angle, max_angle)
    return math.cos(a) * u + math.sin(a) * w


def random_plank_covering(K: ConvexBody, C: ConvexBody | None, seed, n: int,
                          perturbations: int = 8, directions: str = "random",
                          tighten: bool = True) -> list:
    """Certified plank covering of ``K``.

    Contiguous sub-slabs of ``K``'s support interval along one direction,
    then bounded random rotations/translations of single planks, each kept
    only if coverage survives, then an optional shrink pass per plank.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = _rng(seed)
    d = K.dim
    u = np.eye(d)[0] if directions == "axis" else random_unit_vector(rng, d)
    h = geo.support_many(K, np.vstack([u, -u]))
    lo, hi = -float(h[1]), float(h[0])
    cuts_at = lo + (hi - lo) * np.concatenate([[0.0], np.cumsum(rng.dirichlet(np.ones(n)))])
    cuts_at[-1] = hi
    family = [Plank(u, cuts_at[i], cuts_at[i + 1]) for i in range(n)]
    span = hi - lo
    for _ in range(perturbations):
        i = int(rng.integers(n))
        P = family[i]
        mid_pt = 0.5 * (P.low + P.high) * P.normal
        nu = _rotate(P.normal, rng, 0.3)
        centre = float(nu @ mid_pt) + rng.uniform(-0.05, 0.05) * span
        half = 0.5 * P.width * rng.uniform(1.0, 1.3)
        trial = family.copy()
        trial[i] = Plank(nu, centre - half, centre + half)
        if covers_body(K, trial).covered:
            family = trial
    if tighten:
        for i in range(n):
            P = family[i]
            lo_f, hi_f = 0.0, 1.0
            for _ in range(8):
                f = 0.5 * (lo_f + hi_f)
                c, half = 0.5 * (P.low + P.high), 0.5 * P.width * f
                trial = family.copy()
                trial[i] = Plank(P.normal, c - half, c + half)
                if covers_body(K, trial).covered:
                    hi_f = f
                else:
                    lo_f = f
            c, half = 0.5 * (P.low + P.high), 0.5 * P.width * hi_f
            family[i] = Plank(P.normal, c - half, c + half)
    return family


def random_hyperplanes(K: ConvexBody, rng, count: int, directions: str = "random") -> list:
    d = K.dim
    out = []
    for k in range(count):
        u = np.eye(d)[0] if directions == "axis" else random_unit_vector(rng, d)
        h = geo.support_many(K, np.vstack([u, -u]))
        lo, hi = -float(h[1]), float(h[0])
        if directions == "axis":
            off = lo + (hi - lo) * (k + 1) / (count + 1)
        else:
            off = rng.uniform(lo + 1e-3 * (hi - lo), hi - 1e-3 * (hi - lo))
        out.append(Hyperplane(u, off))
    return out


def random_sites(K: ConvexBody, rng, count: int) -> np.ndarray:
    V = K.vertices
    w = rng.exponential(size=(count, len(V)))
    w /= w.sum(axis=1)[:, None]
    return w @ V


def clip_box_for(K: ConvexBody) -> ConvexBody:
    V = K.vertices
    pad = 0.5 * float(np.max(V.max(axis=0) - V.min(axis=0)))
    return ConvexBody.box(V.min(axis=0) - pad, V.max(axis=0) + pad)


def cut_merge_cells(K: ConvexBody, rng, target: int) -> list:
    """Arrangement cells of random cuts, greedily merged while the union stays convex.

    Convex but in general not an inductive partition.  Merging is planar only.
    """
    hyper = random_hyperplanes(K, rng, max(2, target))
    cells = cuts.arrangement_pieces(K, hyper).cells
    if K.dim != 2:
        return cells
    polys = [c.vertices for c in cells]
    while len(polys) > target:
        order = [(i, j) for i in range(len(polys)) for j in range(i + 1, len(polys))]
        rng.shuffle(order)
        for i, j in order:
            U = np.vstack([polys[i], polys[j]])
            hull = planar.convex_hull(U, strict=False)
            a = planar.area(polys[i]) + planar.area(polys[j])
            if abs(planar.area(hull) - a) <= 1e-12 * max(1.0, a):
                polys = [p for k, p in enumerate(polys) if k not in (i, j)] + [hull]
                break
        else:
            break
    out = []
    for V in polys:
        A, b = planar.edge_halfspaces(V)
        out.append(ConvexBody("hpoly", 2, normals=A, offsets=b, vertices=V))
    return out


# ------------------------------------------------------------------ config & report

@dataclass
class ProbeConfig:
    target: str
    dimension: int = 2
    trials: int = 100
    master_seed: int = 0
    m: int = 1
    n: int = 2
    tolerance: float = 1e-6
    vertices: int = 6
    body: dict | None = None
    gauge: object = "self"
    directions: str = "random"
    perturbations: int = 8
    tighten: bool = True
    partition: str = "mixed"
    problem: int = 1
    inner_tol: float = 1e-9

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.target not in TARGETS:
            raise ValueError(f"unknown target {self.target!r}; expected one of {TARGETS}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 2 <= self.dimension <= 8:
            raise ValueError("dimension must be in [2, 8]")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.m < 1 or self.n < 1:
            raise ValueError("m and n must be positive")
        if isinstance(self.gauge, str) and self.gauge not in GAUGES:
            raise ValueError(f"unknown gauge {self.gauge!r}")
        if self.partition not in ("voronoi", "cut-merge", "mixed"):
            raise ValueError("partition must be voronoi, cut-merge or mixed")
        if self.problem not in (1, 2):
            raise ValueError("problem must be 1 or 2")

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        names = {f.name for f in fields(cls)}
        camel = {"masterSeed": "master_seed", "innerTol": "inner_tol"}
        kw = {camel.get(k, k): v for k, v in d.items()}
        unknown = set(kw) - names
        if unknown:
            raise ValueError(f"unknown config keys {sorted(unknown)}")
        return cls(**kw)

    @property
    def proved(self) -> bool:
        """Whether the probed inequality is a theorem for this instance family."""
        if self.target == "partition-problem" and self.problem == 1:
            return self.partition == "voronoi" or self.dimension == 2
        return False


@dataclass
class ProbeReport:
    config: dict
    per_trial: list
    min_deficit: float
    argmin_trial: int
    argmin_instance: dict
    violations: list
    status: str
    statement: str
    wall_time: float = field(default=0.0)

    @property
    def violated(self) -> bool:
        return bool(self.violations)

    def to_dict(self, include_timing: bool = False):
        out = {"config": self.config, "perTrial": self.per_trial, "minDeficit": self.min_deficit,
               "argMinTrial": self.argmin_trial, "argMinInstance": self.argmin_instance,
               "violations": self.violations, "status": self.status,
               "statement": self.statement}
        if include_timing:
            out["wallTime"] = self.wall_time
        return out

    def to_json(self, include_timing: bool = False) -> str:
        return formats.dumps(self.to_dict(include_timing))

    def to_csv(self) -> str:
        rows = ["trial,seed,deficit"]
        rows += [f"{t['trial']},{t['seed']},{t['deficit']!r}" for t in self.per_trial]
        return "\n".join(rows) + "\n"


# ------------------------------------------------------------------ trials

def trial_seed(master_seed: int, index: int) -> int:
    ss = np.random.SeedSequence([int(master_seed), int(index)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _gauge(cfg, K, rng):
    g = cfg.gauge
    if isinstance(g, dict):
        return formats.body_from_dict(g)
    if g == "self":
        return K
    if g == "ball":
        return ConvexBody.ball(np.zeros(cfg.dimension), 1.0)
    return random_body(rng, cfg.dimension, cfg.vertices, symmetric=(g == "symmetric"))


def make_instance(cfg: ProbeConfig, seed: int) -> dict:
    rng = np.random.default_rng(seed)
    d = cfg.dimension
    if cfg.body is not None:
        K = formats.body_from_dict(cfg.body)
    else:
        K = random_body(rng, d, max(cfg.vertices, d + 1))
    C = _gauge(cfg, K, rng)
    inst = {"body": formats.body_to_dict(K), "gauge": formats.body_to_dict(C)}
    if cfg.target in ("affine-plank", "successive-plank"):
        fam = random_plank_covering(K, C, rng, cfg.n, cfg.perturbations, cfg.directions,
                                    cfg.tighten)
        inst["planks"] = [formats.plank_to_dict(P) for P in fam]
    elif cfg.target == "cut-conjecture":
        hyper = random_hyperplanes(K, rng, cfg.n - 1, cfg.directions)
        inst["hyperplanes"] = [formats.hyperplane_to_dict(H) for H in hyper]
    else:
        kind = cfg.partition
        if kind == "mixed":
            kind = "voronoi" if rng.random() < 0.5 else "cut-merge"
        if kind == "voronoi" or cfg.target == "covering-problem":
            count = int(rng.integers(2, max(2, cfg.n) + 1))
            sites = random_sites(K, rng, count)
            cells = cuts.voronoi_partition(sites, clip_box_for(K)).cells
            if cfg.target == "covering-problem":
                # enlarge every cell: still a convex covering, no longer a partition
                span = float(np.ptp(K.vertices, axis=0).max())
                cells = [ConvexBody("hpoly", d, normals=c.normals,
                                    offsets=c.offsets + rng.uniform(0, 0.2 * span, len(c.offsets)))
                         for c in cells]
                kind = "expanded-voronoi"
        else:
            cells = cut_merge_cells(K, rng, max(2, cfg.n))
        inst["family"] = kind
        inst["cells"] = [formats.body_to_dict(c) for c in cells]
    return inst


def evaluate_instance(target: str, inst: dict, m: int = 1, problem: int = 1,
                      tol: float = 1e-9) -> float:
    """Deficit of one serialised instance (negative = inequality fails)."""
    K = formats.body_from_dict(inst["body"], validate=False)
    C = formats.body_from_dict(inst["gauge"], validate=False)
    if target in ("affine-plank", "successive-plank"):
        fam = [formats.plank_from_dict(p) for p in inst["planks"]]
        res = affine_deficit(K, C, fam, m=m if target == "successive-plank" else None, tol=tol)
        return res.deficit if target == "affine-plank" else res.successive_deficit
    if target == "cut-conjecture":
        hyper = [formats.hyperplane_from_dict(h) for h in inst["hyperplanes"]]
        n = len(hyper) + 1
        pieces = cuts.arrangement_pieces(K, hyper)
        best, _ = cuts.greatest_piece_inradius(pieces, C, m, tol)
        return best - ErosionProfile(K, C).successive(m * n, tol).rho
    cells = [formats.body_from_dict(c, validate=False) for c in inst["cells"]]
    pieces = []
    for cell in cells:
        piece = geo.intersect(K.as_hpoly(), cell)
        if piece.is_full:
            pieces.append(piece)
    vals = [ErosionProfile(p, C).successive(m, tol).rho for p in pieces]
    prof = ErosionProfile(K, C)
    if problem == 1:
        return float(sum(vals)) - prof.successive(m, tol).rho
    return float(max(vals)) - prof.successive(m * len(pieces), tol).rho


def _run_trial(index, cfg_dict):
    cfg = ProbeConfig.from_dict(cfg_dict)
    seed = trial_seed(cfg.master_seed, index)
    inst = make_instance(cfg, seed)
    deficit = evaluate_instance(cfg.target, inst, cfg.m, cfg.problem, cfg.inner_tol)
    return {"trial": index, "seed": seed, "deficit": deficit, "digest": formats.digest(inst)}, inst


def _statement(cfg):
    return {
        "affine-plank": "sum of C-widths of covering planks >= minimal C-width of the body",
        "successive-plank": f"sum of C-widths of covering planks >= m r_C(K, m), m={cfg.m}",
        "cut-conjecture": f"greatest r_C(piece, m) over n-1 hyperplane cuts >= r_C(K, mn), "
                          f"m={cfg.m}, n={cfg.n}",
        "partition-problem": (f"sum r_C(V_i cap K, m) >= r_C(K, m), m={cfg.m}" if cfg.problem == 1
                              else f"max r_C(V_i cap K, m) >= r_C(K, m n), m={cfg.m}"),
        "covering-problem": (f"sum r_C(V_i cap K, m) >= r_C(K, m) over convex coverings, m={cfg.m}"
                             if cfg.problem == 1
                             else f"max r_C(V_i cap K, m) >= r_C(K, m n) over convex coverings, m={cfg.m}"),
    }[cfg.target]


def probe(cfg: ProbeConfig, workers: int = 1) -> ProbeReport:
    """Run ``cfg.trials`` seeded trials and aggregate the deficits."""
    start = time.perf_counter()
    cfg_dict = cfg.to_dict()
    results = pmap(partial(_run_trial, cfg_dict=cfg_dict), range(cfg.trials), workers)
    per_trial = [r for r, _ in results]
    deficits = [r["deficit"] for r in per_trial]
    k = int(np.argmin(deficits))
    violations = []
    for rec, inst in results:
        if rec["deficit"] < -cfg.tolerance:
            recheck = evaluate_instance(cfg.target, inst, cfg.m, cfg.problem, cfg.inner_tol / 10)
            if recheck < -cfg.tolerance:
                violations.append({"trial": rec["trial"], "seed": rec["seed"],
                                   "deficit": rec["deficit"], "recheckDeficit": recheck,
                                   "instance": inst})
    if violations:
        status = "violation found"
    else:
        status = f"no counterexample found in {cfg.trials} trials"
    return ProbeReport(cfg_dict, per_trial, float(deficits[k]), k, results[k][1], violations,
                       status, _statement(cfg), time.perf_counter() - start)


# ------------------------------------------------------------------ theorem suites

@dataclass
class SuiteReport:
    theorem: str
    trials: int
    min_margin: float
    threshold: float
    violations: list
    details: dict = field(default_factory=dict)

    @property
    def violated(self) -> bool:
        return bool(self.violations)

    def to_dict(self):
        return {"theorem": self.theorem, "trials": self.trials, "minMargin": self.min_margin,
                "threshold": self.threshold, "violations": self.violations,
                "status": "violation found" if self.violations else "no violation",
                **self.details}


def _plank_trial(index, name, body, gauge, n, seed, d, k, perturbations, m):
    rng = np.random.default_rng(trial_seed(seed, index))
    sym = name == "ball"
    K = formats.body_from_dict(body) if body else random_body(rng, d, k, symmetric=sym)
    if gauge == "self" or gauge is None or name == "ball":
        C = K
    elif isinstance(gauge, dict):
        C = formats.body_from_dict(gauge)
    else:
        C = random_body(rng, d, k)
    nn = 2 if name == "two-plank" else n
    fam = random_plank_covering(K, C, rng, nn, perturbations)
    if name == "bang":
        margin = bang_deficit(K, fam)
    else:
        margin = affine_deficit(K, C, fam).deficit
    inst = {"body": formats.body_to_dict(K), "gauge": formats.body_to_dict(C),
            "planks": [formats.plank_to_dict(P) for P in fam]}
    return float(margin), inst


def plank_theorem_suite(name: str, body: dict | None = None, gauge=None, n: int = 3,
                        trials: int = 100, seed: int = 0, d: int = 2, k: int = 6,
                        perturbations: int = 8, threshold: float | None = None,
                        workers: int = 1) -> SuiteReport:
    """Random coverings checked against Bang, Ball or the two-plank lemma.

    ``ball`` draws centrally symmetric bodies and measures plank widths
    relative to the covered body itself; ``gauge`` is ignored there.
    """
    if name not in ("bang", "ball", "two-plank"):
        raise ValueError(f"unknown plank theorem {name!r}")
    if threshold is None:
        threshold = 1e-9 if name == "bang" else 1e-6
    if name == "ball" and body is not None:
        if not is_centrally_symmetric(formats.body_from_dict(body)):
            raise ValueError("Ball's theorem needs a centrally symmetric covered body")
    fn = partial(_plank_trial, name=name, body=body, gauge=gauge, n=n, seed=seed, d=d, k=k,
                 perturbations=perturbations, m=1)
    results = pmap(fn, range(trials), workers)
    margins = [r[0] for r in results]
    viol = [{"trial": i, "margin": margins[i], "instance": results[i][1]}
            for i in range(trials) if margins[i] < -threshold]
    return SuiteReport(name, trials, float(min(margins)), threshold, viol)


def _partition_trial(index, body, gauge, seed, d, k, m, max_sites, tol):
    rng = np.random.default_rng(trial_seed(seed, index))
    K = formats.body_from_dict(body) if body else random_body(rng, d, k)
    if isinstance(gauge, dict):
        C = formats.body_from_dict(gauge)
    elif gauge == "self":
        C = K
    else:
        C = random_body(rng, d, k)
    count = int(rng.integers(2, max_sites + 1))
    part = cuts.voronoi_partition(random_sites(K, rng, count), clip_box_for(K))
    rep = cuts.verify_partition_inequality(K, C, part, m, tol)
    return rep.deficit, rep.width_deficit


def partition_theorem_suite(name: str, body: dict | None = None, gauge="random", m: int = 1,
                            trials: int = 100, seed: int = 0, d: int = 2, k: int = 6,
                            max_sites: int = 6, threshold: float = 1e-6, tol: float = 1e-9,
                            workers: int = 1) -> SuiteReport:
    """Voronoi partitions checked against the successive inradius sum (or its width corollary)."""
    if name not in ("akopyan-karasev", "corollary-width"):
        raise ValueError(f"unknown partition theorem {name!r}")
    fn = partial(_partition_trial, body=body, gauge=gauge, seed=seed, d=d, k=k, m=m,
                 max_sites=max_sites, tol=tol)
    results = pmap(fn, range(trials), workers)
    pick = 0 if name == "akopyan-karasev" else 1
    margins = [r[pick] for r in results]
    viol = [{"trial": i, "margin": margins[i]} for i in range(trials) if margins[i] < -threshold]
    return SuiteReport(name, trials, float(min(margins)), threshold, viol, {"m": m})
