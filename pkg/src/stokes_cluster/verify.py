"""Verification suites.  Each returns a SuiteResult with the worst observed error,
the threshold it is held to and per-case details."""

from dataclasses import dataclass, field
from functools import lru_cache

import networkx as nx
import numpy as np

from . import cluster as cl
from . import projective as pj
from .errors import AmbiguousStructure, NotSaddleFree, StokesClusterError
from .foliation import classify, random_saddle_free, wkb_triangulation
from .main_map import F, chamber_search, equivariance_error, flip_coherence, jacobian_F
from .polynomial import from_coefficients, period, random_polynomial
from .stokes import (
    asymptotic_values,
    asymptotic_values_direct,
    normalize_tuple,
    sibuya_margins,
    tuple_distance,
)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    value: float
    threshold: float
    samples: int
    detail: dict = field(default_factory=dict)

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return (f"{status} {self.name}: worst {self.value:.3g} vs {self.threshold:.3g} "
                f"over {self.samples} samples")

    def to_json(self):
        return {"name": self.name, "passed": self.passed, "value": self.value,
                "threshold": self.threshold, "samples": self.samples}


def _rng(seed, tag):
    return np.random.default_rng([seed, tag])


# ---------------------------------------------------------------- Stokes data


@lru_cache(maxsize=8)
def stokes_samples(samples=50, seed=0, max_n=3):
    """(p, wronskian tuple, direct tuple) for ``samples`` random polynomials per n."""
    out = []
    for n in range(max_n + 1):
        rng = _rng(seed, 100 + n)
        for _ in range(samples):
            p = random_polynomial(rng, n)
            out.append((p, asymptotic_values(p), asymptotic_values_direct(p)))
    return tuple(out)


def two_method(samples=50, seed=0, tol=1e-6):
    data = stokes_samples(samples, seed)
    errs = [tuple_distance(normalize_tuple(a), normalize_tuple(b)) for _, a, b in data]
    worst = max(errs)
    return SuiteResult("two-method", worst < tol, worst, tol, len(data))


def sibuya(samples=50, seed=0, tol=1e-7):
    data = stokes_samples(samples, seed)
    margins = [sibuya_margins(t) for _, a, b in data for t in (a, b)]
    worst = min(min(m) for m in margins)
    return SuiteResult("sibuya", worst > tol, worst, tol, len(data),
                       {"min_adjacent": min(m[0] for m in margins),
                        "min_three_distinct": min(m[1] for m in margins)})


def equivariance(samples=20, seed=0, tol=1e-7):
    errs = []
    for n in range(4):
        rng = _rng(seed, 500 + n)
        errs += [equivariance_error(random_polynomial(rng, n)) for _ in range(samples)]
    worst = max(errs)
    return SuiteResult("equivariance", worst < tol, worst, tol, len(errs))


# ---------------------------------------------------------------- charts


def _generic_pair(rng, c):
    """Random (T, k) with c generic for both T and flip(T, k), or None."""
    Ts = cl.all_triangulations(c.m)
    for idx in rng.permutation(len(Ts)):
        T = Ts[idx]
        if not cl.is_generic(c, T):
            continue
        for a in rng.permutation(len(T.arcs)):
            k = T.arcs[a]
            if cl.is_generic(c, cl.flip(T, k)):
                return T, k
    return None


def pentagon_cycle(c):
    """Five mutations of a pentagon chart, always at the older arc.

    Returns (gap to the starting chart, gap to the geometric chart at each step).
    """
    T = cl.IdealTriangulation(5, [(0, 2), (0, 3)])
    start = cl.chart_coords(c, T)
    chart, newest = start, None
    geometric = 0.0
    for _ in range(5):
        k = next(a for a in chart.arcs if a != newest)
        before = set(chart.arcs)
        chart = cl.mutate_coords(chart, k)
        newest = next(a for a in chart.arcs if a not in before)
        direct = cl.chart_coords(c, chart.triangulation).X
        geometric = max(geometric, float(np.max(np.abs(chart.X - direct) / np.abs(direct))))
    if chart.arcs != start.arcs:
        return np.inf, geometric
    return float(np.max(np.abs(chart.X - start.X) / np.abs(start.X))), geometric


def flip_suite(samples=200, seed=0, tol=1e-8):
    rng = _rng(seed, 300)
    errs = []
    while len(errs) < samples:
        n = int(rng.integers(1, 4))
        p = random_polynomial(rng, n)
        c = F(p)
        pair = _generic_pair(rng, c)
        if pair is None:
            continue
        errs.append(flip_coherence(p, *pair, config=c))
    rng = _rng(seed, 301)
    cycles = [pentagon_cycle(F(random_polynomial(rng, 2))) for _ in range(10)]
    cycle = max(max(x) for x in cycles)
    worst = max(max(errs), cycle)
    return SuiteResult("flip-coherence", worst < tol, worst, tol, len(errs),
                       {"both_paths": max(errs), "pentagon_cycle": cycle})


def _family(name):
    return {"z^2-1": from_coefficients(1, [-1]), "z^3-z": from_coefficients(2, [0, -1])}[name]


@lru_cache(maxsize=4)
def chamber_cases(samples=10, seed=0, max_n=3):
    """Outcome of the eps search on the explicit families and random saddle-free samples."""
    cases = []
    todo = [(name, _family(name), None) for name in ("z^2-1", "z^3-z")]
    for n in range(1, max_n + 1):
        rng = _rng(seed, 400 + n)
        for i in range(samples):
            p, s = random_saddle_free(rng, n)
            todo.append((f"random n={n} #{i}", p, s))
    for name, p, s in todo:
        case = {"name": name, "polynomial": p, "structure": None, "eps": None,
                "max_log": None, "ok": False, "error": ""}
        try:
            s = s or classify(p)
            case["structure"] = s
            res = chamber_search(p, s)
        except (NotSaddleFree, StokesClusterError) as exc:
            case["error"] = f"{type(exc).__name__}: {exc}"
        else:
            case.update(eps=res.eps, max_log=res.max_log(), ok=res.success,
                        error=res.failure)
        cases.append(case)
    return tuple(cases)


def chamber(samples=10, seed=0, eps_min=1e-3, log_bound=40.0):
    cases = chamber_cases(samples, seed)
    bad = [c for c in cases if not c["ok"]]
    worst = max((c["max_log"] for c in cases if c["ok"]), default=0.0)
    detail = {"failures": [(c["name"], c["error"]) for c in bad],
              "min_eps": min((c["eps"] for c in cases if c["ok"]), default=None)}
    return SuiteResult("chamber", not bad, worst, log_bound, len(cases), detail)


def jacobian(samples=20, seed=0, tol=1e-8, drift_tol=0.1):
    sig = []
    drift = []
    for n in (1, 2, 3):
        rng = _rng(seed, 600 + n)
        for _ in range(samples):
            p, s = random_saddle_free(rng, n)
            J = jacobian_F(p, T=wkb_triangulation(p, s), tol=drift_tol)
            sig.append(J.sigma_min)
            drift.append(J.drift)
    worst = min(sig)
    return SuiteResult("jacobian", worst > tol and max(drift) < drift_tol, worst, tol, len(sig),
                       {"max_drift": max(drift)})


# ---------------------------------------------------------------- foliation


@lru_cache(maxsize=2)
def wall_sweep(points=2000):
    """classify along z^2 - exp(i theta) on a uniform theta grid."""
    thetas = np.linspace(-np.pi, np.pi, points, endpoint=False)
    rows = []
    for th in thetas:
        p = from_coefficients(1, [-np.exp(1j * th)])
        try:
            s = classify(p)
            status = "free" if s.saddle_free else "saddle"
        except AmbiguousStructure:
            s, status = None, "ambiguous"
        rows.append((float(th), p, s, status, period(p, 0, 1).value))
    return tuple(rows)


def walls(points=2000, band=1e-3):
    rows = wall_sweep(points)
    walls_at = np.array([-np.pi / 2, np.pi / 2])
    off = []
    near = {float(w): [] for w in walls_at}
    for th, _, _, status, _ in rows:
        d = np.abs(th - walls_at)
        if d.min() < band:
            near[float(walls_at[d.argmin()])].append(status)
        elif status != "free":
            off.append(th)
    detected = all("saddle" in v for v in near.values())
    # analytic walls: Z real, i.e. Z^2 crosses the positive real axis (branch-free)
    z2 = np.array([r[4] ** 2 for r in rows])
    flips = [rows[i][0] for i in range(len(rows))
             if np.sign(z2[i].imag) != np.sign(z2[i - 1].imag) and z2[i].real + z2[i - 1].real > 0]
    analytic = len(flips) == 2 and all(
        min(abs(f - w) for w in walls_at) <= 1.5 * (2 * np.pi / points) for f in flips)
    worst = max((min(abs(th - walls_at)) for th in off), default=0.0)
    return SuiteResult("walls", not off and detected and analytic, worst, band, len(rows),
                       {"off_band_flips": off, "saddles_detected_at_walls": detected,
                        "period_sign_changes": flips})


def _trajectory_stats(structures):
    worst = 0.0
    validated = 0
    failures = []
    for s in structures:
        for trajs in s.separatrices.values():
            for t in trajs:
                worst = max(worst, t.im_defect / t.w_length)
        if s.saddle_free:
            try:
                wkb_triangulation(s.polynomial, s)
                validated += 1
            except StokesClusterError as exc:
                failures.append(str(exc))
    return worst, validated, failures


def trajectories(samples=10, seed=0, points=2000, tol=1e-6):
    structures = [c["structure"] for c in chamber_cases(samples, seed) if c["structure"]]
    structures += [r[2] for r in wall_sweep(points) if r[2] is not None]
    worst, validated, failures = _trajectory_stats(structures)
    return SuiteResult("trajectories", worst < tol and not failures, worst, tol, len(structures),
                       {"triangulations_validated": validated, "failures": failures})


# ---------------------------------------------------------------- combinatorics


CATALAN = {4: 2, 5: 5, 6: 14, 7: 42, 8: 132}


def combinatorics():
    problems = []
    for m, cnt in CATALAN.items():
        if len(cl.all_triangulations(m)) != cnt:
            problems.append(f"count m={m}")
        G = cl.exchange_graph(m)
        if not nx.is_connected(G) or any(d != m - 3 for _, d in G.degree()):
            problems.append(f"exchange graph m={m}")
    checked = 0
    for m in range(4, 8):
        for T in cl.all_triangulations(m):
            Q = cl.quiver_of(T)
            for k in T.arcs:
                T2, bij = cl.arc_bijection(T, k)
                mu = cl.mutate_quiver(Q, T.index(k)).eps
                perm = np.empty_like(mu)
                for i in range(len(bij)):
                    for j in range(len(bij)):
                        perm[bij[i], bij[j]] = mu[i, j]
                if not np.array_equal(perm, cl.quiver_of(T2).eps):
                    problems.append(f"mutation m={m} {T.arcs} at {k}")
                checked += 1
    return SuiteResult("combinatorics", not problems, float(len(problems)), 0.5, checked,
                       {"problems": problems})


def _relative(a, b):
    return float(np.max(np.abs(a - b) / np.abs(b), initial=0.0))


def reconstruction(samples=100, seed=0, tol_chart=1e-10, tol_config=1e-9):
    chart_err = 0.0
    config_err = 0.0
    count = 0
    for n in range(5):
        m = n + 3
        Ts = cl.all_triangulations(m)
        rng = _rng(seed, 900 + n)
        for _ in range(samples):
            T = Ts[rng.integers(len(Ts))]
            ch = cl.random_chart(rng, T)
            back = cl.chart_coords(cl.reconstruct(T, ch), T)
            chart_err = max(chart_err, _relative(back.X, ch.X))
            c = cl.random_configuration(rng, m)
            c2 = cl.reconstruct(T, cl.chart_coords(c, T))
            a, _ = cl.normalize_points(c.points)
            b, _ = cl.normalize_points(c2.points)
            config_err = max(config_err, float(np.max(pj.chordal(a, b))))
            count += 1
    ok = chart_err < tol_chart and config_err < tol_config
    return SuiteResult("reconstruction", ok, max(chart_err, config_err), tol_config, count,
                       {"chart_roundtrip": chart_err, "config_roundtrip": config_err})


SUITES = {
    "two-method": two_method,
    "sibuya": sibuya,
    "flip-coherence": flip_suite,
    "chamber": chamber,
    "equivariance": equivariance,
    "jacobian": jacobian,
    "walls": walls,
    "combinatorics": combinatorics,
    "reconstruction": reconstruction,
    "trajectories": trajectories,
}

SAMPLE_ARG = {"two-method", "sibuya", "flip-coherence", "chamber", "equivariance", "jacobian",
              "reconstruction", "trajectories"}


def run_suite(name, samples=None, seed=0):
    fn = SUITES[name]
    kwargs = {}
    if name in SAMPLE_ARG:
        kwargs["seed"] = seed
        if samples is not None:
            kwargs["samples"] = samples
    elif name == "walls" and samples is not None:
        kwargs["points"] = samples
    return fn(**kwargs)
