import json

import numpy as np
import pytest

from stokes_cluster.cluster import IdealTriangulation, all_triangulations
from stokes_cluster.errors import NotSaddleFree, StartTooCloseToZero, StructureInconsistent
from stokes_cluster.foliation import (
    StokesDirection,
    Zero,
    classify,
    fan_is_cyclic,
    prong_angles,
    random_saddle_free,
    trace_trajectory,
    triangulation_from_fans,
    wall_proximity,
    wkb_triangulation,
)
from stokes_cluster.polynomial import from_coefficients, rotate_framing
from stokes_cluster.svg import structure_svg

AIRY = from_coefficients(0, [])
SQUARE = from_coefficients(1, [-1])


def angle_close(a, b, tol=1e-12):
    return abs(np.angle(np.exp(1j * (a - b)))) < tol


def test_trace_from_two_on_square_escapes_right():
    t = trace_trajectory(SQUARE, 2.0, +1)
    assert t.terminus == StokesDirection(0)
    assert t.im_defect < 1e-8 * t.w_length
    assert t.horizontal


@pytest.mark.parametrize("j", range(3))
def test_airy_bisectors_escape_to_neighbours(j):
    start = 2.0 * np.exp(1j * (np.pi / 3 + 2 * np.pi * j / 3))
    ends = {trace_trajectory(AIRY, start, s).terminus for s in (1, -1)}
    assert ends == {StokesDirection(j), StokesDirection((j + 1) % 3)}


def test_start_at_zero_rejected():
    with pytest.raises(StartTooCloseToZero):
        trace_trajectory(SQUARE, 1.0 + 1e-7, 1)


def test_prongs():
    assert all(angle_close(a, b) for a, b in zip(prong_angles(AIRY, 0), [0, 2 * np.pi / 3, 4 * np.pi / 3]))
    # zero at +1 of z^2 - 1 is index 1
    assert all(angle_close(a, b) for a, b in zip(prong_angles(SQUARE, 1), [0, 2 * np.pi / 3, 4 * np.pi / 3]))
    q = from_coefficients(1, [1])
    k = int(np.argmin(np.abs(q.roots - 1j)))
    got = prong_angles(q, k)
    assert angle_close(got[0], -np.pi / 6)


def test_airy_structure():
    s = classify(AIRY)
    assert s.saddle_free
    assert s.zero_fan[0] == (0, 1, 2)
    assert wkb_triangulation(AIRY, s).arcs == ()


def test_square_is_saddle_free_with_one_diagonal():
    s = classify(SQUARE)
    assert s.saddle_free
    T = wkb_triangulation(SQUARE, s)
    assert len(T.arcs) == 1
    assert T.arcs[0] in ((0, 2), (1, 3))


def test_imaginary_square_has_saddle():
    s = classify(from_coefficients(1, [-1j]))
    assert not s.saddle_free
    assert [(i, j) for i, j, _ in s.saddles] == [(0, 1)]
    assert isinstance(s.saddles[0][2].terminus, Zero)
    with pytest.raises(NotSaddleFree):
        wkb_triangulation(from_coefficients(1, [-1j]))


def test_cubic_example_sits_on_a_wall():
    # P = z^3 - z is positive on (-1, 0), so the segment between those zeros is horizontal
    p = from_coefficients(2, [0, -1])
    s = classify(p)
    assert not s.saddle_free
    assert (0, 1) in [(i, j) for i, j, _ in s.saddles]


@pytest.mark.xfail(strict=True, raises=NotSaddleFree,
                   reason="z^3 - z carries a saddle on [-1, 0]; no WKB triangulation exists")
def test_cubic_example_triangulation_as_listed():
    T = wkb_triangulation(from_coefficients(2, [0, -1]))
    assert T.arcs in [t.arcs for t in all_triangulations(5)]


def test_tilted_cubic_has_pentagon_triangulation():
    p = from_coefficients(2, [0, -np.exp(0.3j)])
    T = wkb_triangulation(p)
    assert len(T.arcs) == 2
    assert T.arcs in [t.arcs for t in all_triangulations(5)]


def test_wall_proximity():
    assert abs(wall_proximity(SQUARE) - 1) < 1e-12
    assert wall_proximity(from_coefficients(1, [-1j * (1 + 1e-9)])) < 1e-8
    assert wall_proximity(AIRY) == np.inf


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_random_structures(n):
    rng = np.random.default_rng(40 + n)
    for _ in range(6):
        p, s = random_saddle_free(rng, n)
        for i, fan in s.zero_fan.items():
            assert fan_is_cyclic(fan, p.m)
        for trajs in s.separatrices.values():
            for t in trajs:
                assert t.im_defect < 1e-6 * t.w_length
        T = wkb_triangulation(p, s)
        assert len(T.arcs) == n
        T2 = wkb_triangulation(rotate_framing(p))
        assert T2.arcs == T.shifted(1).arcs


def test_fan_validation_rejects_overlap():
    with pytest.raises(StructureInconsistent):
        triangulation_from_fans(4, {0: (0, 1, 2), 1: (0, 1, 2)})
    T = triangulation_from_fans(4, {0: (3, 1, 2), 1: (0, 1, 3)})
    assert T == IdealTriangulation(4, [(1, 3)])


def test_fan_cyclicity():
    assert fan_is_cyclic((3, 1, 2), 4)
    assert not fan_is_cyclic((2, 1, 3), 4)
    assert not fan_is_cyclic((0, 0, 1), 4)


def test_structure_json_and_svg():
    s = classify(SQUARE)
    doc = json.loads(json.dumps(s.to_json()))
    assert doc["saddle_free"] is True
    assert len(doc["separatrices"]["0"]) == 3
    svg = structure_svg(s, wkb_triangulation(SQUARE, s))
    assert svg.startswith("<?xml") and "stroke-dasharray" in svg and svg.count("<polyline") == 6
