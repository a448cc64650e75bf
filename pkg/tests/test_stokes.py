import json

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import airy_log_derivative, airy_values

from stokes_cluster import projective as pj
from stokes_cluster.errors import GenericityViolation
from stokes_cluster.polynomial import from_coefficients, random_polynomial, rotate_framing
from stokes_cluster.foliation import random_saddle_free
from stokes_cluster.stokes import (
    AsymptoticTuple,
    SolutionFrame,
    asymptotic_value,
    asymptotic_value_direct,
    asymptotic_values,
    asymptotic_values_direct,
    normalize_tuple,
    seed_radius,
    subdominant_solution,
    tuple_distance,
    tuple_from_json,
    _propagate,
)

AIRY = from_coefficients(0, [])


def test_airy_subdominant_log_derivative():
    sol = subdominant_solution(AIRY, 0)
    assert abs(sol.dy / sol.y - airy_log_derivative(0)) < 1e-12


def test_airy_values_match_mpmath():
    t = asymptotic_values(AIRY)
    for k, ref in enumerate(airy_values()):
        assert pj.chordal(t.w[k], pj.point(ref)) < 1e-12
    assert len({np.round(v, 8) for v in t.values()}) == 3


def test_taylor_propagation_matches_airy():
    mpmath_val = airy_log_derivative(3 + 1j)
    a0, d0 = complex(mpmath.airyai(0)), complex(mpmath.airyai(0, derivative=1))
    Y = _propagate(AIRY, 0, 3 + 1j, [a0, d0])[0]
    assert abs(Y[1] / Y[0] - mpmath_val) < 1e-12


def test_subdominant_is_independent_of_dominant():
    # Y_(k+1) is seeded separately and grows along the central ray of sector k
    p = random_polynomial(np.random.default_rng(2), 2)
    for k in range(p.m):
        a = subdominant_solution(p, k)
        b = subdominant_solution(p, k + 1)
        assert abs(a.y) + abs(a.dy) > 0
        W = a.y * b.dy - a.dy * b.y
        assert abs(W) > 1e-8 * abs(np.array([a.y, a.dy])).max() * abs(np.array([b.y, b.dy])).max()


def test_seed_radius_stability():
    rng = np.random.default_rng(4)
    for n in range(4):
        p = random_polynomial(rng, n)
        for k in range(p.m):
            R = seed_radius(p)
            a = asymptotic_value(p, k, R=R, check=False)
            b = asymptotic_value(p, k, R=2 * R, check=False)
            assert pj.chordal(a, b) < 1e-8


def test_mobius_covariance_of_frame():
    rng = np.random.default_rng(6)
    p = random_polynomial(rng, 2)
    M = pj.random_mobius(rng)
    t = asymptotic_values(p)
    u = asymptotic_values(p, SolutionFrame.standard().transformed(M))
    assert np.max(pj.chordal(u.w, pj.apply(M, t.w))) < 1e-8
    assert tuple_distance(normalize_tuple(t), normalize_tuple(u)) < 1e-8


@pytest.mark.parametrize("n", range(4))
def test_two_methods_agree(n):
    rng = np.random.default_rng(20 + n)
    for _ in range(5):
        p = random_polynomial(rng, n)
        a = normalize_tuple(asymptotic_values(p))
        b = normalize_tuple(asymptotic_values_direct(p))
        assert tuple_distance(a, b) < 1e-6


@pytest.mark.parametrize("offset", [-0.3, 0.3])
def test_direct_limit_is_ray_independent(offset):
    p = random_polynomial(np.random.default_rng(9), 1)
    for k in range(p.m):
        a = asymptotic_value_direct(p, k)
        b = asymptotic_value_direct(p, k, ray_offset=offset * np.pi / p.m)
        assert pj.chordal(a, b) < 1e-6


def test_sibuya_on_saddle_and_saddle_free_samples():
    rng = np.random.default_rng(12)
    for n in range(4):
        for _ in range(5):
            asymptotic_values(random_polynomial(rng, n))
        if n:
            asymptotic_values(random_saddle_free(rng, n)[0])
    # on a wall too
    asymptotic_values(from_coefficients(1, [-1j]))


def test_rotation_shifts_tuple():
    rng = np.random.default_rng(14)
    for n in range(4):
        p = random_polynomial(rng, n)
        t = asymptotic_values(p)
        r = asymptotic_values(rotate_framing(p))
        shifted = AsymptoticTuple(np.roll(t.w, 1, axis=0), t.method)
        assert tuple_distance(normalize_tuple(r), normalize_tuple(shifted)) < 1e-7


def tup(values):
    return AsymptoticTuple(pj.points(values), "wronskian")


def test_normalize_fixed_tuple():
    t = normalize_tuple(tup([0, 1, None, 0.3 + 2j]))
    assert tuple_distance(t, tup([0, 1, None, 0.3 + 2j])) < 1e-15
    assert t.normalized


def test_normalize_one_two_three_four():
    # z -> (z - 1)(2 - 3)/((z - 3)(2 - 1)) sends 1, 2, 3 to 0, 1, inf and 4 to -3
    t = normalize_tuple(tup([1, 2, 3, 4]))
    assert tuple_distance(t, tup([0, 1, None, -3])) < 1e-15


@settings(max_examples=40, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
                min_size=4, max_size=7, unique=True))
def test_normalize_is_idempotent(values):
    t = tup(values)
    try:
        a = normalize_tuple(t)
    except GenericityViolation:
        return
    assert tuple_distance(normalize_tuple(a), a) < 1e-9


def test_adjacent_coincidence_rejected():
    with pytest.raises(GenericityViolation):
        normalize_tuple(tup([0, 0, 1, 2]))
    with pytest.raises(GenericityViolation):
        normalize_tuple(tup([0, 1, 0, 1]))


def test_tuple_json():
    t = asymptotic_values(AIRY)
    doc = json.loads(json.dumps(t.to_json()))
    assert set(doc) == {"w", "method", "normalized"}
    assert tuple_distance(tuple_from_json(doc), t) == 0
