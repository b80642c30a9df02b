import pytest

from plankkit import formats, geometry as geo, search
from plankkit.planks import covers_body, plank_relative_width
from plankkit.search import ProbeConfig, probe, random_body, random_plank_covering

from conftest import square


def test_random_body_deterministic():
    a, b = random_body(42, 2, 7), random_body(42, 2, 7)
    assert formats.dumps(formats.body_to_dict(a)) == formats.dumps(formats.body_to_dict(b))
    c = random_body(43, 2, 7)
    assert formats.digest(formats.body_to_dict(a)) != formats.digest(formats.body_to_dict(c))


@pytest.mark.parametrize("d", [2, 3, 4])
def test_random_simplex(d):
    K = random_body(0, d, d + 1)
    assert K.is_full
    assert len(K.normals) == d + 1


def test_random_symmetric_body():
    from plankkit.planks import is_centrally_symmetric
    assert is_centrally_symmetric(random_body(5, 2, 4, symmetric=True))


def test_covering_single_slab():
    K = random_body(1, 2, 6)
    C = random_body(2, 2, 5)
    fam = random_plank_covering(K, C, 3, 1, perturbations=0, tighten=False)
    P = fam[0]
    assert P.width == pytest.approx(geo.width_parallel(K, P.normal), abs=1e-12)
    assert plank_relative_width(P, C) >= geo.minimal_relative_width(K, C).value - 1e-12


def test_covering_two_slabs_sum_to_width():
    K = random_body(1, 2, 6)
    fam = random_plank_covering(K, K, 4, 2, perturbations=0, tighten=False)
    assert fam[0].normal @ fam[1].normal == pytest.approx(1.0)
    assert fam[0].width + fam[1].width == pytest.approx(
        geo.width_parallel(K, fam[0].normal), abs=1e-12)


def test_covering_always_certified():
    for seed in range(10):
        K = random_body(seed, 2, 6)
        fam = random_plank_covering(K, K, seed, 3, perturbations=10)
        assert covers_body(K, fam).covered


def test_covering_3d():
    K = random_body(0, 3, 8)
    fam = random_plank_covering(K, K, 0, 3, perturbations=4)
    assert covers_body(K, fam).covered


def test_config_validation():
    with pytest.raises(ValueError):
        ProbeConfig("nonsense")
    with pytest.raises(ValueError):
        ProbeConfig("affine-plank", trials=0)
    with pytest.raises(ValueError):
        ProbeConfig("affine-plank", dimension=9)
    with pytest.raises(ValueError):
        ProbeConfig("affine-plank", tolerance=0.0)
    cfg = ProbeConfig("cut-conjecture", n=3, m=2)
    assert ProbeConfig.from_dict(cfg.to_dict()) == cfg


def test_probe_axis_slabs_square():
    Q = formats.body_to_dict(square())
    cfg = ProbeConfig("affine-plank", trials=5, body=Q, gauge="self", directions="axis",
                      perturbations=0, tighten=False, n=3)
    rep = probe(cfg)
    assert all(abs(t["deficit"]) < 1e-12 for t in rep.per_trial)


def test_probe_cube_parallel_cuts():
    cube = formats.body_to_dict(square(-1, 1, 3))
    for n in (2, 3, 4):
        cfg = ProbeConfig("cut-conjecture", dimension=3, trials=2, body=cube, gauge="self",
                          directions="axis", n=n)
        rep = probe(cfg)
        assert all(abs(t["deficit"]) < 1e-8 for t in rep.per_trial)


@pytest.mark.parametrize("target", search.TARGETS)
def test_probe_report_contract(target):
    cfg = ProbeConfig(target, trials=6, master_seed=3, n=3)
    rep = probe(cfg)
    deficits = [t["deficit"] for t in rep.per_trial]
    assert rep.min_deficit == min(deficits)
    assert rep.status.startswith("no counterexample found")
    assert "verified" not in rep.status
    again = search.evaluate_instance(target, rep.argmin_instance, cfg.m, cfg.problem,
                                     cfg.inner_tol)
    assert again == pytest.approx(rep.min_deficit, abs=1e-9)
    assert "wallTime" not in rep.to_dict()
    assert "wallTime" in rep.to_dict(include_timing=True)


def test_probe_csv():
    rep = probe(ProbeConfig("affine-plank", trials=3))
    lines = rep.to_csv().strip().splitlines()
    assert lines[0] == "trial,seed,deficit" and len(lines) == 4


def test_proved_partition_problem_3d_voronoi():
    cfg = ProbeConfig("partition-problem", dimension=3, trials=3, partition="voronoi", m=2)
    assert cfg.proved
    rep = probe(cfg)
    assert rep.min_deficit >= -cfg.tolerance


def test_cut_merge_cells_convex(rng):
    K = random_body(9, 2, 7)
    cells = search.cut_merge_cells(K, rng, 3)
    from plankkit import planar
    assert len(cells) >= 1
    total = sum(planar.area(c.vertices) for c in cells)
    assert total == pytest.approx(planar.area(K.vertices), rel=1e-9)
    for c in cells:
        assert c.is_full


def test_theorem_suites_clean():
    for name in ("bang", "ball", "two-plank"):
        rep = search.plank_theorem_suite(name, trials=8, seed=1, gauge="random")
        assert not rep.violated
    for name in ("akopyan-karasev", "corollary-width"):
        rep = search.partition_theorem_suite(name, trials=5, seed=2, m=2)
        assert not rep.violated
