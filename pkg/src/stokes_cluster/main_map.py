"""The map F from polynomials to configurations of points in CP^1, its hbar-deformation,
and the checks that tie it to cluster charts."""

from dataclasses import dataclass

import numpy as np

from .cluster import (
    Configuration,
    chart_coords,
    find_generic_triangulation,
    flip,
    mutate_coords,
)
from .errors import GenericityViolation, InputError, NonGeneric, NotSaddleFree, StepTooLarge
from .foliation import classify, wall_proximity, wkb_triangulation
from .polynomial import from_coefficients, rotate_framing, scale_action
from .stokes import (
    PROJ_TOL,
    AsymptoticTuple,
    asymptotic_values,
    normalize_tuple,
    tuple_distance,
)

LOG_BOUND = 40.0
EPS_START = 0.5
EPS_MIN = 1e-3
RICHARDSON_TOL = 0.1


@dataclass(frozen=True)
class HbarParam:
    """A point of the half disk {|hbar| < eps_bound, Re hbar > 0}."""

    hbar: complex
    eps_bound: float = np.inf

    def __post_init__(self):
        h = complex(self.hbar)
        object.__setattr__(self, "hbar", h)
        if not np.isfinite(h) or h.real <= 0:
            raise InputError(f"hbar must have positive real part, got {h}")
        if abs(h) >= self.eps_bound:
            raise InputError(f"|hbar| = {abs(h):.3g} is outside the disk of radius {self.eps_bound}")

    def t(self, n):
        """t = hbar^(-2/(n+3)) on the principal branch."""
        return complex(np.exp(-2.0 / (n + 3) * np.log(self.hbar)))


def _hbar(h):
    return h if isinstance(h, HbarParam) else HbarParam(h)


def F(p, genericity_tol=PROJ_TOL):
    """Configuration k -> w_k of asymptotic values, marked point k in sector k."""
    return Configuration(asymptotic_values(p, genericity_tol=genericity_tol).w)


def F_hbar(p, h):
    """F at t.p with t = hbar^(-2/(n+3)).

    As hbar shrinks, neighbouring values approach each other like exp(-c/hbar),
    so only exact coincidence is rejected here; the chart bound on |log|X||
    is the working guard.
    """
    h = _hbar(h)
    q = p if h.hbar == 1 else scale_action(h.t(p.n), p)
    return F(q, genericity_tol=0.0)


def wkb_chart(p, h, structure=None):
    """Cross-ratio chart of F_hbar(p) in the torus of the WKB triangulation of p."""
    T = wkb_triangulation(p, structure)
    return chart_coords(F_hbar(p, h), T)


@dataclass(frozen=True, eq=False)
class ChamberSearch:
    polynomial: object
    eps: float
    charts: dict
    success: bool
    failure: str = ""

    def max_log(self):
        if not self.charts:
            return 0.0
        return max(float(np.max(np.abs(np.log(np.abs(ch.X))), initial=0.0))
                   for ch in self.charts.values())


def chamber_search(p, structure=None, eps=EPS_START, eps_min=EPS_MIN, log_bound=LOG_BOUND):
    """Halve eps until wkb_chart succeeds at eps, eps/2 and eps/4 with |log|X|| < log_bound."""
    structure = structure or classify(p)
    T = wkb_triangulation(p, structure)
    cache = {}

    def attempt(h):
        if h not in cache:
            try:
                ch = chart_coords(F_hbar(p, h), T)
            except (NonGeneric, GenericityViolation) as exc:
                cache[h] = (None, f"{type(exc).__name__}: {exc}")
            else:
                worst = float(np.max(np.abs(np.log(np.abs(ch.X))), initial=0.0))
                cache[h] = (ch, "" if worst < log_bound else f"|log|X|| = {worst:.3g}")
        return cache[h]

    last = ""
    while eps >= eps_min:
        hs = (eps, eps / 2, eps / 4)
        results = [attempt(h) for h in hs]
        bad = [msg for _, msg in results if msg]
        if not bad:
            return ChamberSearch(p, eps, {h: ch for h, (ch, _) in zip(hs, results)}, True)
        last = bad[0]
        eps /= 2
    return ChamberSearch(p, eps, {}, False, last)


def _fd_jacobian(p, T, steps):
    n = p.n
    a = np.array(p.a, dtype=complex)
    J = np.empty((n, n), dtype=complex)
    for i in range(n):
        e = np.zeros(n, dtype=complex)
        e[i] = steps[i]
        Xp = chart_coords(F(from_coefficients(n, a + e)), T).X
        Xm = chart_coords(F(from_coefficients(n, a - e)), T).X
        J[:, i] = np.log(Xp / Xm) / (2 * steps[i])
    return J


@dataclass(frozen=True, eq=False)
class JacobianReport:
    matrix: np.ndarray
    sigma_min: float
    condition: float
    drift: float
    triangulation: object

    def to_json(self):
        return {"matrix": [[[float(z.real), float(z.imag)] for z in row] for row in self.matrix],
                "sigma_min": self.sigma_min, "condition": self.condition, "drift": self.drift,
                "arcs": self.triangulation.to_json()}


def reference_triangulation(p, structure=None):
    """The WKB triangulation when p is saddle-free, else one adapted to F(p)."""
    try:
        return wkb_triangulation(p, structure)
    except NotSaddleFree:
        T = find_generic_triangulation(F(p))
        if T is None:
            raise NonGeneric("no triangulation is generic for F(p)")
        return T


def jacobian_F(p, h=None, T=None, tol=RICHARDSON_TOL):
    """Central-difference Jacobian of log X_j with respect to (a_0, ..., a_(n-1)).

    The default step is 1e-5 (1 + |a_i|); the same matrix is rebuilt at half the
    step and StepTooLarge is raised if the two disagree by more than ``tol``.
    """
    if p.n == 0:
        raise InputError("the coefficient space is a point when n = 0")
    T = T or reference_triangulation(p)
    a = np.abs(np.array(p.a))
    steps = 1e-5 * (1 + a) if h is None else np.full(p.n, float(h))
    J = _fd_jacobian(p, T, steps)
    J2 = _fd_jacobian(p, T, steps / 2)
    drift = float(np.linalg.norm(J - J2) / np.linalg.norm(J2))
    if not drift < tol:
        raise StepTooLarge(f"Jacobian changes by {drift:.2%} when the step is halved")
    s = np.linalg.svd(J2, compute_uv=False)
    return JacobianReport(J2, float(s[-1]), float(s[0] / s[-1]), drift, T)


def flip_coherence(p, T, k, config=None):
    """Max relative gap between the chart on flip(T, k) and the mutated chart on T."""
    c = config if config is not None else F(p)
    direct = chart_coords(c, flip(T, k)).X
    mutated = mutate_coords(chart_coords(c, T), k).X
    return float(np.max(np.abs(direct - mutated) / np.abs(direct)))


def equivariance_error(p):
    """Distance between normalize(F(rotate_framing(p))) and normalize of the +1 shift of F(p)."""
    w = asymptotic_values(p)
    shifted = AsymptoticTuple(np.roll(w.w, 1, axis=0), w.method)
    rotated = asymptotic_values(rotate_framing(p))
    return tuple_distance(normalize_tuple(rotated), normalize_tuple(shifted))


@dataclass(frozen=True, eq=False)
class MapReport:
    polynomial: object
    hbar: complex
    tuple: AsymptoticTuple
    saddle_free: bool
    triangulation: object = None
    chart: object = None
    wall_proximity: float = np.inf
    jacobian: object = None

    def to_json(self):
        doc = {
            "polynomial": self.polynomial.to_json(),
            "hbar": [self.hbar.real, self.hbar.imag],
            "asymptotic_values": self.tuple.to_json(),
            "saddle_free": self.saddle_free,
            "triangulation": self.triangulation.to_json() if self.triangulation else None,
            "chart": self.chart.to_json() if self.chart else None,
            "diagnostics": {
                "wall_proximity": None if np.isinf(self.wall_proximity) else self.wall_proximity,
                "jacobian_sigma_min": self.jacobian.sigma_min if self.jacobian else None,
                "jacobian_condition": self.jacobian.condition if self.jacobian else None,
            },
        }
        return doc


def map_report(p, hbar=1.0, jacobian=False):
    """Run the full pipeline at one hbar.  The chart uses the WKB triangulation when p is
    saddle-free and otherwise any triangulation adapted to the configuration."""
    h = _hbar(hbar)
    structure = classify(p)
    q = p if h.hbar == 1 else scale_action(h.t(p.n), p)
    t = asymptotic_values(q)
    c = Configuration(t.w)
    if structure.saddle_free:
        T = wkb_triangulation(p, structure)
    else:
        T = find_generic_triangulation(c, PROJ_TOL)
    chart = None
    if T is not None:
        try:
            chart = chart_coords(c, T)
        except NonGeneric:
            chart = None
    jac = jacobian_F(p, T=T) if jacobian and p.n > 0 and chart is not None else None
    return MapReport(p, h.hbar, t, structure.saddle_free, T, chart, wall_proximity(p), jac)

