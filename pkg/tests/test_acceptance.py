"""Acceptance gate.  Each test records one PASS/FAIL line; the lines are
repeated in the terminal summary."""

import time

import numpy as np
import pytest

from gate import record

from stokes_cluster import verify
from stokes_cluster.errors import NotSaddleFree
from stokes_cluster.main_map import chamber_search
from stokes_cluster.polynomial import from_coefficients


def check(key, result):
    record(key, result.passed, result.line()[5:])
    assert result.passed, result.detail


def test_1_two_method_agreement():
    start = time.perf_counter()
    verify.stokes_samples(50, 0)
    elapsed = time.perf_counter() - start
    res = verify.two_method(50, 0, tol=1e-6)
    ok = res.passed and elapsed < 60
    record("1", ok, f"{res.line()[5:]}, {elapsed:.1f} s of 60 s")
    assert ok


def test_2_sibuya_genericity():
    check("2", verify.sibuya(50, 0, tol=1e-7))


def test_3_flip_coherence():
    check("3", verify.flip_suite(200, 0, tol=1e-8))


def _case(name):
    return next(c for c in verify.chamber_cases(10, 0) if c["name"] == name)


def _chamber_ok(case):
    if not case["ok"]:
        return False
    res = chamber_search(case["polynomial"], case["structure"])
    hbars = sorted(res.charts, key=abs, reverse=True)
    return (res.eps >= 1e-3 and len(hbars) == 3
            and np.allclose(hbars, [res.eps, res.eps / 2, res.eps / 4])
            and all(np.all(np.isfinite(ch.X)) and np.all(ch.X != 0) for ch in res.charts.values())
            and res.max_log() < 40)


@pytest.fixture(scope="module")
def chamber_time():
    start = time.perf_counter()
    verify.chamber_cases(10, 0)
    return time.perf_counter() - start


def test_4a_chamber_square(chamber_time):
    case = _case("z^2-1")
    ok = _chamber_ok(case)
    record("4a", ok, f"z^2-1 eps {case['eps']} max |log|X|| {case['max_log']:.3g} vs 40")
    assert ok


@pytest.mark.xfail(strict=True, raises=NotSaddleFree,
                   reason="z^3 - z is positive on (-1, 0): the period between those zeros is real, "
                          "the segment is a saddle trajectory and no WKB chart exists")
def test_4b_chamber_cubic(chamber_time):
    case = _case("z^3-z")
    record("4b", case["ok"], f"z^3-z {case['error'] or 'ok'}")
    chamber_search(case["polynomial"])


def test_4c_chamber_random(chamber_time):
    cases = [c for c in verify.chamber_cases(10, 0) if c["name"].startswith("random")]
    bad = [c["name"] for c in cases if not _chamber_ok(c)]
    ok = not bad and chamber_time < 120
    worst = max(c["max_log"] for c in cases if c["ok"])
    min_eps = min(c["eps"] for c in cases if c["ok"])
    record("4c", ok, f"{len(cases)} random saddle-free samples, min eps {min_eps}, "
                     f"max |log|X|| {worst:.3g} vs 40, {chamber_time:.1f} s of 120 s")
    assert ok, bad


def test_5_equivariance():
    check("5", verify.equivariance(20, 0, tol=1e-7))


def test_6_jacobian():
    check("6", verify.jacobian(20, 0, tol=1e-8, drift_tol=0.1))


def test_7_walls():
    check("7", verify.walls(2000, band=1e-3))


def test_8_combinatorics():
    check("8", verify.combinatorics())


def test_9_reconstruction():
    check("9", verify.reconstruction(100, 0, tol_chart=1e-10, tol_config=1e-9))


def test_10_trajectories():
    check("10", verify.trajectories(10, 0, points=2000, tol=1e-6))


def test_square_chart_matches_oscillator():
    # the z^2 - 1 chart at hbar is exp(-i pi / hbar)
    res = chamber_search(from_coefficients(1, [-1]))
    for h, ch in res.charts.items():
        assert abs(ch.X[0] - np.exp(-1j * np.pi / h)) < 1e-9
