"""Randomised invariants of support, width, erosion and successive C-inradii."""
import numpy as np
from hypothesis import HealthCheck, given, settings, strategies as st

from plankkit import geometry as geo
from plankkit.bodies import ConvexBody
from plankkit.geometry import Hyperplane
from plankkit.inradius import ErosionProfile
from plankkit.search import random_body

TOL = 1e-9
SETTINGS = settings(max_examples=30, deadline=None,
                    suppress_health_check=[HealthCheck.too_slow])

seeds = st.integers(0, 2**32 - 1)
unit2 = st.floats(0, 2 * np.pi).map(lambda t: np.array([np.cos(t), np.sin(t)]))
shifts = st.lists(st.floats(-5, 5), min_size=2, max_size=2).map(np.array)


def pair(seed, d=2):
    rng = np.random.default_rng(seed)
    return random_body(rng, d, 7), random_body(rng, d, 5)


@SETTINGS
@given(seeds, unit2)
def test_width_symmetric(seed, u):
    K, _ = pair(seed)
    assert abs(geo.width_parallel(K, u) - geo.width_parallel(K, -u)) < 1e-12


@SETTINGS
@given(seeds, unit2, shifts)
def test_support_translation_covariant(seed, u, t):
    K, _ = pair(seed)
    lhs = geo.support_value(K.translate(t), u)
    assert abs(lhs - geo.support_value(K, u) - t @ u) < 1e-9 * max(1, np.abs(t).max())


@SETTINGS
@given(seeds, unit2)
def test_lp_support_matches_vertex_support(seed, u):
    K, _ = pair(seed)
    H = ConvexBody.from_halfspaces(K.normals, K.offsets)
    assert abs(geo.support_lp(H, u) - float(np.max(K.vertices @ u))) < 1e-9


@SETTINGS
@given(seeds, st.floats(0.05, 0.45), st.floats(0.05, 0.45))
def test_erosion_composes(seed, a, b):
    K, C = pair(seed)
    C, _ = geo.centered(C)
    r = geo.c_inradius(K, C)[0]
    a, b = a * r, b * r
    lhs = geo.eroded_offsets(geo.erode(K, C, a), C, b)
    rhs = geo.eroded_offsets(K, C, a + b)
    assert np.allclose(lhs, rhs, rtol=0, atol=1e-12 * K.scale)


@SETTINGS
@given(seeds, st.integers(1, 4), shifts)
def test_successive_translation_invariant(seed, m, t):
    K, C = pair(seed)
    a = ErosionProfile(K, C).successive(m, TOL).rho
    b = ErosionProfile(K.translate(t), C.translate(-t)).successive(m, TOL).rho
    assert abs(a - b) <= 2 * TOL * max(1, a)


@SETTINGS
@given(seeds, st.integers(1, 4), st.sampled_from([0.5, 2.0, 3.0]))
def test_successive_homogeneous(seed, m, lam):
    K, C = pair(seed)
    a = ErosionProfile(K, C).successive(m, TOL).rho
    b = ErosionProfile(K.scaled(lam), C).successive(m, TOL).rho
    assert abs(b - lam * a) <= 2 * TOL * max(1, lam * a)


@SETTINGS
@given(seeds, st.integers(1, 4), unit2, st.floats(0.1, 0.9))
def test_successive_inclusion_monotone(seed, m, u, frac):
    K, C = pair(seed)
    lo, hi = -geo.support_value(K, -u), geo.support_value(K, u)
    piece = geo.slice_with_halfspace(K, Hyperplane(u, lo + frac * (hi - lo)), -1)
    a = ErosionProfile(piece, C).successive(m, TOL).rho
    b = ErosionProfile(K, C).successive(m, TOL).rho
    assert a <= b + 2 * TOL * max(1, b)


@SETTINGS
@given(seeds)
def test_m_times_r_increasing(seed):
    K, C = pair(seed)
    prof = ErosionProfile(K, C)
    terms = [m * prof.successive(m, 1e-11).rho for m in range(1, 7)]
    assert all(b >= a - 1e-8 for a, b in zip(terms, terms[1:]))
    assert terms[-1] <= geo.minimal_relative_width(K, C).value + 1e-9


@SETTINGS
@given(seeds)
def test_first_successive_is_lp_inradius(seed):
    K, C = pair(seed)
    r = ErosionProfile(K, C).successive(1, 1e-11).rho
    assert abs(r - geo.c_inradius(K, C)[0]) <= 1e-6 * r


@settings(max_examples=10, deadline=None)
@given(seeds)
def test_3d_successive_matches_packing(seed):
    K, C = pair(seed, 3)
    prof = ErosionProfile(K, C)
    for m in (2, 3):
        assert abs(prof.successive(m, 1e-10).rho - prof.successive_via_packing(m, 1e-10)) < 1e-6
