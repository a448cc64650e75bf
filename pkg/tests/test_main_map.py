import json

import numpy as np
import pytest

from oracles import weber_cross_ratio

from stokes_cluster.cluster import IdealTriangulation, all_triangulations, chart_coords, is_generic
from stokes_cluster.errors import InputError, NotSaddleFree, StepTooLarge
from stokes_cluster.foliation import random_saddle_free, wkb_triangulation
from stokes_cluster.main_map import (
    F,
    F_hbar,
    HbarParam,
    chamber_search,
    equivariance_error,
    flip_coherence,
    jacobian_F,
    map_report,
    wkb_chart,
)
from stokes_cluster.polynomial import from_coefficients, random_polynomial
from stokes_cluster.stokes import normalize_tuple, tuple_distance, AsymptoticTuple

SQUARE = from_coefficients(1, [-1])
CUBIC = from_coefficients(2, [0, -1])


def test_hbar_branch():
    assert HbarParam(1).t(1) == 1
    for n in range(4):
        t = HbarParam(0.37).t(n)
        assert t.imag == 0 and t.real > 0
    with pytest.raises(InputError):
        HbarParam(-0.1)
    with pytest.raises(InputError):
        HbarParam(0.5, eps_bound=0.4)


def test_F_of_airy_is_generic_triple():
    c = F(from_coefficients(0, []))
    assert c.m == 3
    vals = c.values()
    assert len({np.round(v, 6) for v in vals}) == 3


def test_F_hbar_at_one_is_F():
    p = random_polynomial(np.random.default_rng(1), 2)
    a = AsymptoticTuple(F(p).points, "wronskian")
    b = AsymptoticTuple(F_hbar(p, 1.0).points, "wronskian")
    assert tuple_distance(a, b) == 0


def test_equivariance():
    rng = np.random.default_rng(2)
    for n in range(4):
        assert equivariance_error(random_polynomial(rng, n)) < 1e-7


@pytest.mark.parametrize("hbar", [0.5, 0.2, 0.1])
def test_square_chart_in_torus(hbar):
    X = wkb_chart(SQUARE, hbar).X
    assert np.all(np.isfinite(X)) and np.all(X != 0)


def test_square_generic_for_wkb_at_small_hbar():
    T = wkb_triangulation(SQUARE)
    assert is_generic(F_hbar(SQUARE, 0.1), T)


@pytest.mark.parametrize("E", [1, 3, 5, 7])
def test_oscillator_levels_give_minus_one(E):
    # y'' = (z^2 - E) y has a bound state exactly when E is odd
    X = wkb_chart(SQUARE, 1.0 / E).X[0]
    assert abs(X + 1) < 1e-9


@pytest.mark.parametrize("hbar", [0.7, 0.3, 0.11, 0.3 + 0.1j])
def test_weber_cross_ratio(hbar):
    X = wkb_chart(SQUARE, hbar).X[0]
    ref = weber_cross_ratio(hbar)
    assert abs(X - ref) < 1e-9 * abs(ref)


@pytest.mark.xfail(strict=True, raises=NotSaddleFree,
                   reason="z^3 - z has a saddle between -1 and 0, so its WKB chart is undefined")
def test_cubic_chart_as_listed():
    X = wkb_chart(CUBIC, 0.1).X
    assert np.all(np.isfinite(X)) and np.all(X != 0)


def test_saddle_bearing_square_rejected():
    with pytest.raises(NotSaddleFree):
        wkb_chart(from_coefficients(1, [-1j]), 0.1)


def test_chamber_search_on_square():
    res = chamber_search(SQUARE)
    assert res.success and res.eps >= 1e-3
    assert res.max_log() < 40


def test_jacobian_square():
    J = jacobian_F(SQUARE)
    assert J.matrix.shape == (1, 1)
    assert abs(J.matrix[0, 0]) > 1e-6
    assert J.drift < 1e-6
    # d log X / d a_0 = i pi for X = exp(i pi a_0) near a_0 = -1
    assert abs(J.matrix[0, 0] - 1j * np.pi) < 1e-6


def test_jacobian_random_cubic():
    p, s = random_saddle_free(np.random.default_rng(3), 2)
    J = jacobian_F(p, T=wkb_triangulation(p, s))
    assert J.sigma_min > 1e-8 and J.drift < 0.1


def test_jacobian_step_too_large():
    with pytest.raises(StepTooLarge):
        jacobian_F(SQUARE, h=0.9, tol=1e-6)


def test_flip_coherence():
    rng = np.random.default_rng(4)
    p = random_polynomial(rng, 3)
    c = F(p)
    for T in all_triangulations(6)[:5]:
        for k in T.arcs:
            assert flip_coherence(p, T, k, c) < 1e-8


def test_square_double_flip():
    p = random_polynomial(np.random.default_rng(5), 1)
    T = IdealTriangulation(4, [(0, 2)])
    from stokes_cluster.cluster import mutate_coords

    ch = chart_coords(F(p), T)
    back = mutate_coords(mutate_coords(ch, (0, 2)), (1, 3))
    assert back.triangulation == T and abs(back.X[0] - ch.X[0]) < 1e-12 * abs(ch.X[0])


def test_map_report_json():
    rep = map_report(SQUARE, 0.2, jacobian=True)
    doc = json.loads(json.dumps(rep.to_json()))
    assert doc["saddle_free"] and doc["triangulation"] == [[1, 3]]
    assert len(doc["chart"]["X"]) == 1
    assert doc["diagnostics"]["jacobian_sigma_min"] > 0
    rep = map_report(from_coefficients(1, [-1j]))
    assert rep.saddle_free is False and rep.chart is not None


def test_normalized_tuple_of_F_is_stable():
    p = random_polynomial(np.random.default_rng(6), 2)
    a = normalize_tuple(AsymptoticTuple(F(p).points, "wronskian"))
    b = normalize_tuple(a)
    assert tuple_distance(a, b) < 1e-14
    assert a.normalized
