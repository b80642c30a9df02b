import math

import numpy as np
import pytest

from plankkit import geometry as geo
from plankkit.bodies import ConvexBody
from plankkit.errors import RhoOutOfRange
from plankkit.inradius import (ErosionProfile, inradius_sequence, packing_feasible,
                               rounded_relative_width, successive_inradius,
                               successive_inradius_via_packing)

from conftest import disk, square, triangle_side2

SQRT3 = math.sqrt(3.0)


def test_rounded_width_of_square_is_one():
    C = square(-0.5, 0.5)
    for rho in (0.1, 0.5, 0.9, 1.0):
        assert rounded_relative_width(C, C, rho) == pytest.approx(1.0, abs=1e-12)


def test_rounded_width_at_inradius_equals_rho():
    K = triangle_side2()
    lam, _ = geo.c_inradius(K, disk())
    assert rounded_relative_width(K, disk(), lam) == pytest.approx(lam, abs=1e-7)


def test_rounded_width_rectangle():
    K = ConvexBody.box([0, 0], [2, 1])
    assert rounded_relative_width(K, square(-0.5, 0.5), 0.25) == pytest.approx(1.0, abs=1e-12)


def test_rounded_width_rho_out_of_range():
    with pytest.raises(RhoOutOfRange):
        rounded_relative_width(square(), disk(), 0.8)


@pytest.mark.parametrize("d", [2, 3])
def test_cube_closed_form(d):
    K = square(-1, 1, d)
    for m in range(1, 6):
        res = successive_inradius(K, K, m, 1e-10)
        assert res.rho == pytest.approx(1.0 / m, abs=1e-9)
        lo, hi = res.bracket
        assert lo <= res.rho <= hi


def test_triangle_disk_closed_forms():
    K, C = triangle_side2(), disk()
    assert successive_inradius(K, C, 1, 1e-10).rho == pytest.approx(1 / SQRT3, abs=1e-9)
    assert successive_inradius(K, C, 2, 1e-10).rho == pytest.approx(SQRT3 / 5, abs=1e-9)


def test_triangle_disk_general_closed_form():
    # w_C(K) (1 - rho sqrt3) + rho = m rho with w_C(K) = sqrt3/2
    K, C = triangle_side2(), disk()
    for m in range(1, 7):
        expect = (SQRT3 / 2) / (m - 1 + 1.5)
        assert successive_inradius(K, C, m, 1e-10).rho == pytest.approx(expect, abs=1e-9)


def test_residual_bound(rng):
    K = ConvexBody.from_vertices(rng.normal(size=(7, 2)))
    C = ConvexBody.from_vertices(rng.normal(size=(5, 2)))
    tol = 1e-9
    for m in (1, 2, 4):
        res = successive_inradius(K, C, m, tol)
        assert res.residual <= (m + 1) * tol * K.scale
        assert 0 < res.rho <= geo.c_inradius(K, C)[0] * (1 + 1e-9)


def test_packing_route_agrees():
    K, C = triangle_side2(), disk()
    assert successive_inradius_via_packing(K, C, 2, 1e-10) == pytest.approx(SQRT3 / 5, abs=1e-5)
    assert successive_inradius_via_packing(K, C, 1, 1e-10) == pytest.approx(1 / SQRT3, abs=1e-6)
    cube = square(-1, 1, 3)
    for m in (1, 2, 3):
        assert successive_inradius_via_packing(cube, cube, m, 1e-10) == pytest.approx(1 / m, abs=1e-8)


def test_packing_feasible_examples():
    C = square(-0.5, 0.5)
    ok, w = packing_feasible(C, C, 1, 0.3, [0.6, 0.8])
    assert ok and w.validate(C, C)
    ok, w = packing_feasible(C, C, 2, 0.5, [1, 0])
    assert ok and w.validate(C, C)
    assert len(w.centers) == 2
    ok, w = packing_feasible(C, C, 2, 0.5 + 1e-6, [1, 0])
    assert not ok and w is None


def test_packing_witness_validates(rng):
    K = ConvexBody.from_vertices(rng.normal(size=(8, 2)))
    C = disk(0.3)
    rho = successive_inradius(K, C, 3, 1e-10).rho
    for _ in range(10):
        l = rng.normal(size=2)
        l /= np.linalg.norm(l)
        ok, w = packing_feasible(K, C, 3, rho * 0.999, l)
        assert ok and w.validate(K, C)


def test_sequence_examples():
    K, C = triangle_side2(), disk()
    seq = inradius_sequence(K, C, 3, 1e-10)
    terms = [t for _, _, t in seq]
    assert terms[0] == pytest.approx(1 / SQRT3, abs=1e-8)
    assert terms[1] == pytest.approx(2 * SQRT3 / 5, abs=1e-8)
    assert terms[0] < terms[1] < terms[2] < SQRT3 / 2
    cube = square(-1, 1)
    assert all(t == pytest.approx(1.0, abs=1e-8) for _, _, t in inradius_sequence(cube, cube, 5, 1e-10))


def test_profile_accepts_uncentered_gauge():
    K = triangle_side2()
    a = ErosionProfile(K, disk(1.0, (5.0, -3.0))).successive(2, 1e-10).rho
    assert a == pytest.approx(SQRT3 / 5, abs=1e-9)


def test_ball_pair():
    res = successive_inradius(disk(2.0), disk(), 2, 1e-10)
    # K^{rho C} = K for balls, so w_C = 2 = 2 rho
    assert res.rho == pytest.approx(1.0, abs=1e-9)
