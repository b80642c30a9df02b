"""Acceptance criteria 1-11, each at its stated tolerance and runtime budget.

Every test records one PASS/FAIL line, collected in the terminal summary.
"""
import json
import math
import os
import time

import numpy as np
import pytest

from plankkit import cuts, geometry as geo, search
from plankkit.cli import main as cli_main
from plankkit.geometry import Hyperplane
from plankkit.inradius import ErosionProfile, packing_feasible
from plankkit.parallel import trial_rng
from plankkit.search import random_body

from conftest import disk, record, square, triangle_side2

pytestmark = pytest.mark.acceptance

SQRT3 = math.sqrt(3.0)


def random_pairs(seed, count, d=2, k_body=7, k_gauge=5):
    out = []
    for i in range(count):
        rng = trial_rng(seed, i)
        out.append((random_body(rng, d, k_body), random_body(rng, d, k_gauge)))
    return out


def unit(rng, d):
    u = rng.normal(size=d)
    return u / np.linalg.norm(u)


def test_criterion_01_cube_closed_form():
    t0 = time.perf_counter()
    worst = 0.0
    for d in (2, 3):
        K = square(-1, 1, d)
        prof = ErosionProfile(K, K)
        for m in range(1, 9):
            worst = max(worst, abs(prof.successive(m, 1e-9).rho - 1 / m))
    dt = time.perf_counter() - t0
    ok = worst <= 1e-7 and dt < 5
    record(1, ok, f"max |r - 1/m| = {worst:.2e} (<= 1e-7), {dt:.2f}s (< 5s)")
    assert ok


def test_criterion_02_triangle_disk():
    t0 = time.perf_counter()
    prof = ErosionProfile(triangle_side2(), disk())
    e1 = abs(prof.successive(1, 1e-9).rho - 1 / SQRT3)
    e2 = abs(prof.successive(2, 1e-9).rho - SQRT3 / 5)
    dt = time.perf_counter() - t0
    ok = e1 <= 1e-7 and e2 <= 1e-6 and dt < 5
    record(2, ok, f"|r1 - 1/sqrt3| = {e1:.2e} (<= 1e-7), |r2 - sqrt3/5| = {e2:.2e} (<= 1e-6), "
                  f"{dt:.2f}s (< 5s)")
    assert ok


def test_criterion_03_bisection_matches_lp():
    t0 = time.perf_counter()
    worst = 0.0
    for d, count in ((2, 200), (3, 50)):
        for K, C in random_pairs(300 + d, count, d, k_body=6 + 2 * (d - 2), k_gauge=5 + (d - 2)):
            r_bis = ErosionProfile(K, C).successive(1, 1e-9).rho
            r_lp = geo.c_inradius(K, C)[0]
            worst = max(worst, abs(r_bis - r_lp) / r_lp)
    dt = time.perf_counter() - t0
    ok = worst <= 1e-6 and dt < 60
    record(3, ok, f"max relative |r_bisect - r_LP| = {worst:.2e} (<= 1e-6) on 200 2D + 50 3D "
                  f"pairs, {dt:.1f}s (< 60s)")
    assert ok


def test_criterion_04_packing_oracle():
    t0 = time.perf_counter()
    worst, witnesses, bad = 0.0, 0, 0
    for i, (K, C) in enumerate(random_pairs(400, 50)):
        C, _ = geo.centered(C)  # packing witnesses are translation vectors for this C
        prof = ErosionProfile(K, C)
        rng = np.random.default_rng(i)
        for m in (1, 2, 3):
            a = prof.successive(m, 1e-10).rho
            b = prof.successive_via_packing(m, 1e-10)
            worst = max(worst, abs(a - b) / K.scale)
            rho = b - 1e-10 * max(1.0, prof.r)
            _, u = prof.min_ratio(rho)
            dirs = [u] + [unit(rng, 2) for _ in range(4)]
            for l in dirs:
                ok_l, w = packing_feasible(K, C, m, rho, l)
                if ok_l:
                    witnesses += 1
                    bad += not w.validate(K, C)
                else:
                    bad += 1
    dt = time.perf_counter() - t0
    ok = worst <= 1e-5 and bad == 0 and dt < 120
    record(4, ok, f"max |fixed-point - packing|/scale = {worst:.2e} (<= 1e-5), {witnesses} "
                  f"witnesses, {bad} invalid, {dt:.1f}s (< 120s)")
    assert ok


def test_criterion_05_monotone_sequence():
    t0 = time.perf_counter()
    worst_drop, worst_excess, worst_gap, flat = 0.0, -np.inf, -np.inf, 0
    for K, C in random_pairs(500, 50):
        prof = ErosionProfile(K, C)
        w = geo.minimal_relative_width(K, C)
        res = [prof.successive(m, 1e-11) for m in range(1, 17)]
        terms = np.array([m * r.rho for m, r in enumerate(res, 1)])
        # each term is known to m * (bracket width); the bound allows that plus the width tolerance
        accuracy = np.array([m * (r.bracket[1] - r.bracket[0]) for m, r in enumerate(res, 1)])
        worst_drop = max(worst_drop, float(np.max(terms[:-1] - terms[1:])))
        worst_excess = max(worst_excess, float(np.max(terms - w.value - w.tolerance - accuracy)))
        # gap(16) <= gap(1), within the same 1e-8 as monotonicity
        worst_gap = max(worst_gap, (w.value - terms[-1]) - (w.value - terms[0]))
        flat += bool(np.ptp(terms) < 1e-8)
    dt = time.perf_counter() - t0
    ok = worst_drop <= 1e-8 and worst_excess <= 0 and worst_gap <= 1e-8 and dt < 120
    record(5, ok, f"max decrease {worst_drop:.2e} (<= 1e-8), max excess over w_C + tolerance "
                  f"{worst_excess:.2e} (<= 0), max gap(16) - gap(1) {worst_gap:.2e} (<= 1e-8), "
                  f"{flat} pairs with r_C(K,1) = w_C(K), {dt:.1f}s (< 120s)")
    assert ok


def test_criterion_06_conway():
    t0 = time.perf_counter()
    worst, attain, runs, violations = np.inf, 0.0, 0, 0
    for i, (K, C) in enumerate(random_pairs(600, 30)):
        for n in (2, 3):
            for m in (1, 2):
                rep = cuts.verify_conway_theorem(K, C, n, m, trials=50, seed=1000 * i + 10 * n + m,
                                                 tol=1e-5, inner_tol=1e-9)
                worst = min(worst, rep.worst_margin)
                attain = max(attain, abs(rep.optimal_value - rep.bound))
                violations += len(rep.violations)
                runs += 1
    dt = time.perf_counter() - t0
    ok = worst >= -1e-5 and attain <= 1e-5 and violations == 0 and dt < 600
    record(6, ok, f"{runs} settings x 50 trees: worst margin {worst:.2e} (>= -1e-5), optimal "
                  f"tree off by {attain:.2e} (<= 1e-5), {violations} violations, {dt:.0f}s (< 600s)")
    assert ok


def test_criterion_07_akopyan_karasev():
    t0 = time.perf_counter()
    worst_r, worst_w, trials = np.inf, np.inf, 0
    for m in (1, 2):
        for i in range(500):
            rng = trial_rng(700 + m, i)
            K, C = random_body(rng, 2, 7), random_body(rng, 2, 5)
            sites = search.random_sites(K, rng, int(rng.integers(2, 7)))
            part = cuts.voronoi_partition(sites, search.clip_box_for(K))
            rep = cuts.verify_partition_inequality(K, C, part, m, 1e-10)
            worst_r, worst_w = min(worst_r, rep.deficit), min(worst_w, rep.width_deficit)
            trials += 1
    dt = time.perf_counter() - t0
    ok = worst_r >= -1e-6 and worst_w >= -1e-6 and dt < 300
    record(7, ok, f"{trials} Voronoi trials: min inradius-sum deficit {worst_r:.2e}, min width-sum "
                  f"deficit {worst_w:.2e} (>= -1e-6), {dt:.0f}s (< 300s)")
    assert ok


def test_criterion_08_plank_theorems():
    t0 = time.perf_counter()
    bang = search.plank_theorem_suite("bang", trials=500, seed=801, n=3)
    two = search.plank_theorem_suite("two-plank", trials=500, seed=802, gauge="random")
    ball = search.plank_theorem_suite("ball", trials=500, seed=803, n=3)
    dt = time.perf_counter() - t0
    ok = (bang.min_margin >= -1e-9 and two.min_margin >= -1e-6 and ball.min_margin >= -1e-6
          and dt < 300)
    record(8, ok, f"500 coverings each: Bang {bang.min_margin:.2e} (>= -1e-9), two-plank "
                  f"{two.min_margin:.2e} (>= -1e-6), Ball {ball.min_margin:.2e} (>= -1e-6), "
                  f"{dt:.0f}s (< 300s)")
    assert ok


def test_criterion_09_conjecture_probes(tmp_path, capsys):
    t0 = time.perf_counter()
    details, ok = [], True
    for target in ("affine-plank", "cut-conjecture"):
        out = tmp_path / f"{target}.json"
        code = cli_main(["probe", "--target", target, "--trials", "1000", "--n", "3",
                         "--seed", "9", "--threads", "1", "--out", str(out)])
        rep = json.loads(out.read_text())
        labelled = rep["status"].startswith("no counterexample found") and \
            "verified" not in rep["status"]
        ok &= code == 0 and rep["minDeficit"] >= -1e-6 and labelled
        details.append(f"{target} min {rep['minDeficit']:.2e} exit {code} '{rep['status']}'")
    dt = time.perf_counter() - t0
    ok &= dt < 600
    record(9, ok, "; ".join(details) + f", {dt:.0f}s (< 600s)")
    assert ok


def test_criterion_10_functional_properties():
    t0 = time.perf_counter()
    tol = 1e-9
    worst = {"translation": 0.0, "homogeneity": 0.0, "monotonicity": 0.0}
    for i, (K, C) in enumerate(random_pairs(1000, 100)):
        rng = np.random.default_rng(i)
        m = int(rng.integers(1, 5))
        base = ErosionProfile(K, C).successive(m, tol).rho
        t = rng.uniform(-3, 3, 2)
        r_t = ErosionProfile(K.translate(t), C).successive(m, tol).rho
        worst["translation"] = max(worst["translation"], abs(r_t - base) / (2 * tol))
        for lam in (0.5, 2.0, 3.0):
            r_l = ErosionProfile(K.scaled(lam), C).successive(m, tol).rho
            worst["homogeneity"] = max(worst["homogeneity"],
                                       abs(r_l - lam * base) / (2 * tol * max(1, lam)))
        u = unit(rng, 2)
        lo, hi = -geo.support_value(K, -u), geo.support_value(K, u)
        piece = geo.slice_with_halfspace(K, Hyperplane(u, lo + rng.uniform(0.2, 0.8) * (hi - lo)))
        r_p = ErosionProfile(piece, C).successive(m, tol).rho
        worst["monotonicity"] = max(worst["monotonicity"], (r_p - base) / (2 * tol))
    dt = time.perf_counter() - t0
    ok = all(v <= 1.0 for v in worst.values()) and dt < 120
    record(10, ok, "worst error in units of 2*tol: " +
           ", ".join(f"{k} {v:.2f}" for k, v in worst.items()) + f" (<= 1), {dt:.1f}s (< 120s)")
    assert ok


def test_criterion_11_determinism(tmp_path, capsys):
    t0 = time.perf_counter()
    many = str(max(2, os.cpu_count() or 1))
    square_path = tmp_path / "tri.json"
    disk_path = tmp_path / "disk.json"
    from plankkit import formats
    square_path.write_text(json.dumps(formats.body_to_dict(triangle_side2())))
    disk_path.write_text(json.dumps(formats.body_to_dict(disk())))
    suites = {
        "probe-affine": ["probe", "--target", "affine-plank", "--trials", "40"],
        "probe-cut": ["probe", "--target", "cut-conjecture", "--trials", "40", "--n", "3"],
        "probe-partition": ["probe", "--target", "partition-problem", "--trials", "30"],
        "verify-conway": ["verify", "conway", "--body", str(square_path), "--gauge",
                          str(disk_path), "--n", "3", "--trials", "30"],
        "verify-bang": ["verify", "bang", "--trials", "30"],
        "verify-ak": ["verify", "akopyan-karasev", "--trials", "20", "--m", "2"],
    }
    mismatched = []
    for name, argv in suites.items():
        blobs = []
        for threads in ("1", many, "1"):
            out = tmp_path / f"{name}-{threads}-{len(blobs)}.json"
            cli_main(argv + ["--seed", "11", "--threads", threads, "--out", str(out)])
            blobs.append(out.read_bytes())
        if len(set(blobs)) != 1:
            mismatched.append(name)
    dt = time.perf_counter() - t0
    ok = not mismatched
    record(11, ok, f"{len(suites)} suites x threads {{1, {many}}} x repeat: "
                   f"{'byte-identical' if ok else 'differ: ' + ', '.join(mismatched)}, {dt:.0f}s")
    assert ok
