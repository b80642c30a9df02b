"""``plankkit`` command-line entry point.

Exit codes: 0 success / no violation, 2 violation found, 1 usage or data error.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import cuts, formats, geometry as geo, inradius, planks, search, svg
from .bodies import ConvexBody
from .errors import GeometryError
from .parallel import default_workers

EXIT_OK, EXIT_ERROR, EXIT_VIOLATION = 0, 1, 2

SCHEMA_HINT = """\
JSON inputs:
  body    {"type":"hpoly","normals":[[..]],"offsets":[..]} | {"type":"vpoly","vertices":[[..]]}
          | {"type":"ball","center":[..],"radius":r}
  planks  [{"normal":[..],"low":r,"high":r}, ...]
  sites   [[x, y], ...]
  tree    "leaf" | {"cut":{"normal":[..],"offset":r},"below":tree,"above":tree}
  config  {"target":"affine-plank", "dimension":2, "trials":100, "master_seed":0, ...}"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n{SCHEMA_HINT}\n")
        sys.exit(EXIT_ERROR)


# ------------------------------------------------------------------ input helpers

def _read_json(path):
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def _unwrap(obj, key):
    """Accept either the bare object or a CLI report that carries it under ``key``."""
    if isinstance(obj, dict) and key in obj and "type" not in obj:
        return obj[key]
    return obj


def load_body(path) -> ConvexBody:
    return formats.body_from_dict(_unwrap(_read_json(path), "body"))


def load_gauge(path, dim) -> ConvexBody:
    if path is None:
        return ConvexBody.ball(np.zeros(dim), 1.0)
    return load_body(path)


def load_planks(path) -> list:
    obj = _unwrap(_read_json(path), "planks")
    return [formats.plank_from_dict(p) for p in obj]


def load_sites(path) -> np.ndarray:
    return np.asarray(_unwrap(_read_json(path), "sites"), dtype=float)


def load_tree(path):
    return formats.tree_from_json(_unwrap(_read_json(path), "tree"))


def _emit(args, obj):
    text = formats.dumps(obj) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _need(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError(f"{args.verb} requires {', '.join(missing)}")


def _workers(args):
    return args.threads if args.threads else default_workers()


# ------------------------------------------------------------------ verbs

def cmd_width(args):
    _need(args, "body")
    K = load_body(args.body)
    if args.gauge is None:
        res = geo.minimal_width(K)
    else:
        res = geo.minimal_relative_width(K, load_body(args.gauge))
    _emit(args, {"width": res.value, "direction": res.direction.tolist(),
                 "tolerance": res.tolerance, "relative": args.gauge is not None})
    return EXIT_OK


def cmd_inradius(args):
    _need(args, "body")
    K = load_body(args.body)
    C = load_gauge(args.gauge, K.dim)
    lam, t = geo.c_inradius(K, C)
    _emit(args, {"inradius": lam, "translation": None if t is None else np.asarray(t).tolist()})
    return EXIT_OK


def cmd_successive(args):
    _need(args, "body")
    K = load_body(args.body)
    C = load_gauge(args.gauge, K.dim)
    prof = inradius.ErosionProfile(K, C)
    res = prof.successive(args.m, args.tol)
    out = res.to_dict()
    if args.via_packing:
        out["rhoPacking"] = prof.successive_via_packing(args.m, args.tol)
    _emit(args, out)
    return EXIT_OK


def cmd_erode(args):
    _need(args, "body", "rho")
    K = load_body(args.body)
    C = load_gauge(args.gauge, K.dim)
    _emit(args, formats.body_to_dict(geo.erode(K, C, args.rho)))
    return EXIT_OK


def cmd_optimal_cuts(args):
    _need(args, "body")
    K = load_body(args.body)
    C = load_gauge(args.gauge, K.dim)
    prof = inradius.ErosionProfile(K, C)
    tree = cuts.optimal_conway_cuts(K, C, args.n, args.m, args.tol, profile=prof)
    cells = cuts.apply_cut_tree(K, tree).cells
    value, _ = cuts.greatest_piece_inradius(cells, C, args.m, args.tol)
    bound = prof.successive(args.m * args.n, args.tol).rho
    _emit(args, {"tree": formats.tree_to_json(tree), "greatestPieceInradius": value,
                 "bound": bound, "n": args.n, "m": args.m})
    return EXIT_OK


def _verify_planks(args, name):
    K = load_body(args.body)
    fam = load_planks(args.planks)
    threshold = args.threshold if args.threshold is not None else (
        1e-9 if name == "bang" else 1e-6)
    if name == "bang":
        margin = planks.bang_deficit(K, fam)
        out = {"deficit": margin}
    elif name == "two-plank":
        if len(fam) != 2:
            raise UsageError("two-plank needs exactly two planks")
        C = load_gauge(args.gauge, K.dim)
        rep = planks.two_plank_check(K, C, fam[0], fam[1], threshold)
        margin, out = rep.margin, rep.to_dict()
    else:
        if not planks.is_centrally_symmetric(K):
            raise UsageError("ball needs a centrally symmetric body")
        rep = planks.affine_deficit(K, K, fam)
        margin = rep.deficit
        out = {"deficit": margin, "planksWidths": rep.plank_widths, "bodyWidth": rep.body_width}
    violated = margin < -threshold
    out.update({"theorem": name, "threshold": threshold,
                "status": "violation found" if violated else "no violation"})
    _emit(args, out)
    return EXIT_VIOLATION if violated else EXIT_OK


def _conway_dict(rep: cuts.ConwayReport):
    return {"theorem": "conway", "n": rep.n, "m": rep.m, "bound": rep.bound,
            "trials": rep.trials, "worstMargin": rep.worst_margin, "worstTrial": rep.worst_trial,
            "worstTree": None if rep.worst_tree is None else formats.tree_to_json(rep.worst_tree),
            "optimalValue": rep.optimal_value,
            "optimalTree": formats.tree_to_json(rep.optimal_tree), "attained": rep.attained,
            "violations": [{"trial": i, "margin": mg, "tree": formats.tree_to_json(t)}
                           for i, mg, t in rep.violations],
            "status": "no violation" if rep.ok else "violation found"}


def cmd_verify(args):
    name = args.theorem
    if name in ("bang", "ball", "two-plank"):
        if args.planks is not None:
            _need(args, "body")
            return _verify_planks(args, name)
        body = formats.body_to_dict(load_body(args.body)) if args.body else None
        gauge = formats.body_to_dict(load_body(args.gauge)) if args.gauge else "random"
        rep = search.plank_theorem_suite(name, body, gauge, n=args.n, trials=args.trials,
                                         seed=args.seed, d=args.dim, threshold=args.threshold,
                                         workers=_workers(args))
        _emit(args, rep.to_dict())
        return EXIT_VIOLATION if rep.violated else EXIT_OK
    if name == "conway":
        _need(args, "body")
        K = load_body(args.body)
        C = load_gauge(args.gauge, K.dim)
        threshold = args.threshold if args.threshold is not None else 1e-5
        rep = cuts.verify_conway_theorem(K, C, args.n, args.m, args.trials, args.seed,
                                         tol=threshold, inner_tol=min(args.tol, 1e-9),
                                         workers=_workers(args))
        _emit(args, _conway_dict(rep))
        return EXIT_OK if rep.ok else EXIT_VIOLATION
    # akopyan-karasev / corollary-width
    threshold = args.threshold if args.threshold is not None else 1e-6
    if args.sites is not None:
        _need(args, "body")
        K = load_body(args.body)
        C = load_gauge(args.gauge, K.dim)
        part = cuts.voronoi_partition(load_sites(args.sites), search.clip_box_for(K))
        rep = cuts.verify_partition_inequality(K, C, part, args.m, min(args.tol, 1e-9))
        margin = rep.deficit if name == "akopyan-karasev" else rep.width_deficit
        violated = margin < -threshold
        out = {"theorem": name, "margin": margin, "threshold": threshold,
               "report": rep.to_dict(),
               "status": "violation found" if violated else "no violation"}
        _emit(args, out)
        return EXIT_VIOLATION if violated else EXIT_OK
    body = formats.body_to_dict(load_body(args.body)) if args.body else None
    gauge = formats.body_to_dict(load_body(args.gauge)) if args.gauge else "random"
    rep = search.partition_theorem_suite(name, body, gauge, m=args.m, trials=args.trials,
                                         seed=args.seed, d=args.dim, threshold=threshold,
                                         workers=_workers(args))
    _emit(args, rep.to_dict())
    return EXIT_VIOLATION if rep.violated else EXIT_OK


def cmd_cover_check(args):
    _need(args, "body", "planks")
    K = load_body(args.body)
    verdict = planks.covers_body(K, load_planks(args.planks), method=args.method)
    _emit(args, verdict.to_dict())
    return EXIT_OK


def cmd_probe(args):
    if args.config is not None:
        cfg_obj = _unwrap(_read_json(args.config), "config")
    else:
        _need(args, "target")
        cfg_obj = {"target": args.target, "dimension": args.dim, "trials": args.trials,
                   "master_seed": args.seed, "m": args.m, "n": args.n}
    if args.threshold is not None:
        cfg_obj["tolerance"] = args.threshold
    cfg = search.ProbeConfig.from_dict(cfg_obj)
    rep = search.probe(cfg, workers=_workers(args))
    _emit(args, rep.to_dict(include_timing=args.timing))
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(rep.to_csv())
    return EXIT_VIOLATION if rep.violated else EXIT_OK


def cmd_plot(args):
    _need(args, "body")
    K = load_body(args.body)
    if K.dim != 2:
        raise UsageError("plot draws planar bodies only")
    C = load_body(args.gauge) if args.gauge else None
    erosion = None
    if args.rho is not None:
        erosion = geo.erode(K, C if C is not None else ConvexBody.ball([0.0, 0.0], 1.0), args.rho)
    hyper = cuts.cut_hyperplanes(load_tree(args.cuts)) if args.cuts else []
    fam = load_planks(args.planks) if args.planks else []
    cells, sites = [], None
    if args.sites:
        sites = load_sites(args.sites)
        cells = cuts.voronoi_partition(sites, search.clip_box_for(K)).cells
    text = svg.plot(K, gauge=C, erosion=erosion, hyperplanes=hyper, planks=fam, cells=cells,
                    sites=sites)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


VERBS = {"width": cmd_width, "inradius": cmd_inradius, "successive-inradius": cmd_successive,
         "erode": cmd_erode, "optimal-cuts": cmd_optimal_cuts, "verify": cmd_verify,
         "cover-check": cmd_cover_check, "probe": cmd_probe, "plot": cmd_plot}
THEOREMS = ("bang", "ball", "two-plank", "conway", "akopyan-karasev", "corollary-width")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--body", help="body JSON file")
    common.add_argument("--gauge", help="gauge body JSON file (default: unit ball)")
    common.add_argument("--tol", type=float, default=1e-7, help="numerical tolerance")
    common.add_argument("--seed", type=int, default=0, help="master seed")
    common.add_argument("--threads", type=int, default=0,
                        help="worker processes (default: all cores)")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--m", type=int, default=1, help="successive index m")
    common.add_argument("--n", type=int, default=2, help="number of pieces / planks")
    common.add_argument("--trials", type=int, default=50)
    common.add_argument("--dim", type=int, default=2, help="dimension of random instances")
    common.add_argument("--threshold", type=float, help="violation threshold")

    p = _Parser(prog="plankkit", description="Relative widths, successive inradii, cuts and "
                                             "plank coverings of convex bodies.",
                epilog=SCHEMA_HINT, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    sub.add_parser("width", parents=[common], help="minimal (relative) width")
    sub.add_parser("inradius", parents=[common], help="C-inradius by linear programming")
    s = sub.add_parser("successive-inradius", parents=[common], help="r_C(K, m)")
    s.add_argument("--via-packing", action="store_true", help="also report the packing route")
    s = sub.add_parser("erode", parents=[common], help="inner parallel body K - rho C")
    s.add_argument("--rho", type=float)
    sub.add_parser("optimal-cuts", parents=[common], help="optimal successive cuts")
    s = sub.add_parser("verify", parents=[common], help="check a proved inequality")
    s.add_argument("theorem", choices=THEOREMS)
    s.add_argument("--planks", help="plank family JSON (checks this family only)")
    s.add_argument("--sites", help="Voronoi sites JSON (checks this partition only)")
    s = sub.add_parser("cover-check", parents=[common], help="does a plank family cover K?")
    s.add_argument("--planks")
    s.add_argument("--method", choices=("auto", "exact", "sample"), default="auto")
    s = sub.add_parser("probe", parents=[common], help="seeded search for counterexamples")
    s.add_argument("--config", help="ProbeConfig JSON")
    s.add_argument("--target", choices=search.TARGETS)
    s.add_argument("--csv", help="also write a per-trial CSV summary")
    s.add_argument("--timing", action="store_true", help="include wallTime in the report")
    s = sub.add_parser("plot", parents=[common], help="SVG of a planar body")
    s.add_argument("--rho", type=float, help="draw the erosion by rho * gauge")
    s.add_argument("--planks")
    s.add_argument("--cuts", help="cut tree JSON")
    s.add_argument("--sites", help="Voronoi sites JSON")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return VERBS[args.verb](args)
    except UsageError as exc:
        sys.stderr.write(f"plankkit {args.verb}: {exc}\n{SCHEMA_HINT}\n")
    except GeometryError as exc:
        sys.stderr.write(f"plankkit {args.verb}: {type(exc).__name__}: {exc}\n")
    except (OSError, json.JSONDecodeError, ValueError, KeyError, TypeError) as exc:
        sys.stderr.write(f"plankkit {args.verb}: {type(exc).__name__}: {exc}\n")
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
