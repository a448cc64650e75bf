"""Horizontal foliation of P(z) dz^2: separatrices, saddles and the WKB triangulation."""

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import _kernels
from .cluster import IdealTriangulation, crosses, is_boundary, _arc
from .errors import (
    AmbiguousStructure,
    BranchTrackingFailure,
    InputError,
    NotSaddleFree,
    StartTooCloseToZero,
    StructureInconsistent,
)
from .polynomial import _half_integral, period


@dataclass(frozen=True)
class StokesDirection:
    """The ray R_{>0} exp(2 pi i k/(n+3)) at infinity, i.e. marked point k."""

    k: int

    def angle(self, m):
        return 2 * np.pi * self.k / m


@dataclass(frozen=True)
class Zero:
    index: int


@dataclass(frozen=True)
class Truncated:
    pass


@dataclass(frozen=True)
class TraceParams:
    escape_radius: float
    exclusion: float
    launch_offset: float
    angular_tol: float
    max_w_length: float
    rtol: float = 1e-9
    atol: float = 1e-13
    max_steps: int = 200_000

    @classmethod
    def for_polynomial(cls, p, **overrides):
        scale = p.sep if np.isfinite(p.sep) else 1.0
        R = 10.0 * (1.0 + p.root_radius)
        params = dict(
            escape_radius=R,
            exclusion=1e-4 * scale,
            launch_offset=1e-3 * scale,
            angular_tol=0.1 * np.pi / p.m,
            max_w_length=50.0 * R ** (p.m / 2),
            atol=1e-13 * (1.0 + p.root_radius),
        )
        params.update(overrides)
        return cls(**params)


@dataclass(frozen=True, eq=False)
class Trajectory:
    points: np.ndarray
    origin: object
    terminus: object
    w_length: float
    im_defect: float = 0.0
    terminal_deviation: float = 0.0
    branch: np.ndarray = field(default=None, repr=False)

    @property
    def horizontal(self):
        return self.im_defect < 1e-6 * max(self.w_length, 1e-300)

    def to_json(self):
        term = self.terminus
        if isinstance(term, StokesDirection):
            t = {"type": "stokes", "k": term.k}
        elif isinstance(term, Zero):
            t = {"type": "zero", "index": term.index}
        else:
            t = {"type": "truncated"}
        return {"origin": self.origin, "terminus": t, "w_length": self.w_length,
                "im_defect": self.im_defect,
                "points": [[float(z.real), float(z.imag)] for z in self.points]}


_GL5_X, _GL5_W = np.polynomial.legendre.leggauss(5)


def horizontality_defect(p, points, branch):
    """Sum over steps of |Im dw|, dw = integral of sqrt(P) over each chord.

    The square root is taken on the branch closest to the tracked value at the
    start of each chord, independently of the integrator's own bookkeeping.
    """
    z0, z1 = points[:-1], points[1:]
    mid, half = 0.5 * (z0 + z1), 0.5 * (z1 - z0)
    nodes = mid[:, None] + half[:, None] * _GL5_X[None, :]
    r = np.sqrt(p(nodes).astype(complex))
    ref = branch[:-1, None]
    r = np.where(np.abs(r - ref) <= np.abs(r + ref), r, -r)
    dw = (r * _GL5_W[None, :]).sum(axis=1) * half
    return float(np.abs(dw.imag).sum()), float(np.abs(dw).sum())


def _classify_escape(z, m, angular_tol):
    ang = np.angle(z)
    k = int(np.round(ang * m / (2 * np.pi))) % m
    dev = abs((ang - 2 * np.pi * k / m + np.pi) % (2 * np.pi) - np.pi)
    return k, dev


def trace_trajectory(p, start, sign=1, params=None, origin=None):
    """Follow the horizontal trajectory through ``start`` in direction dz/ds = sign/sqrt(P).

    The square root is principal at ``start`` and continued along the path.
    """
    if sign not in (1, -1):
        raise InputError("sign must be +1 or -1")
    params = params or TraceParams.for_polynomial(p)
    start = complex(start)
    if np.min(np.abs(p.roots - start)) < params.exclusion:
        raise StartTooCloseToZero(f"start {start} lies within {params.exclusion:.3g} of a zero")
    c = p.coeffs
    v0 = np.sqrt(complex(p(start)))
    zs, vs, count, status, hit, s = _kernels.trace(
        c, p.roots.astype(complex), start, v0, float(sign), params.escape_radius,
        params.exclusion, params.max_w_length, params.rtol, params.atol, params.max_steps)
    zs = zs[:count].copy()
    vs = vs[:count].copy()
    if status == _kernels.BRANCH_FAIL:
        raise BranchTrackingFailure(f"lost the branch of sqrt(P) near {zs[-1]}")
    dev = 0.0
    if status == _kernels.ESCAPED:
        k, dev = _classify_escape(zs[-1], p.m, params.angular_tol)
        terminus = StokesDirection(k)
    elif status == _kernels.HIT_ZERO:
        terminus = Zero(int(hit))
    else:
        terminus = Truncated()
    defect, _ = horizontality_defect(p, zs, vs)
    return Trajectory(zs, origin, terminus, float(s), defect, float(dev), vs)


def prong_angles(p, zero):
    """Launch angles (2 pi m - arg P'(alpha))/3, m = 0, 1, 2, in increasing order."""
    c = complex(p.derivative(p.roots[zero]))
    return [(2 * np.pi * m - np.angle(c)) / 3 for m in range(3)]


def _refine_launch(p, alpha, r0, theta):
    """Adjust theta so that Im of the integral of sqrt(P) from alpha to the launch point vanishes."""
    for _ in range(3):
        z = alpha + r0 * np.exp(1j * theta)
        v = np.sqrt(complex(p(z)))
        w, _ = _half_integral(p, z, alpha, v, 2)
        w = -w
        dw = v * 1j * r0 * np.exp(1j * theta)
        if dw.imag == 0:
            break
        step = w.imag / dw.imag
        theta -= step
        if abs(step) < 1e-15:
            break
    return theta


def separatrices(p, zero, params=None):
    """The three horizontal trajectories leaving a simple zero, in launch-angle order."""
    params = params or TraceParams.for_polynomial(p)
    alpha = p.roots[zero]
    r0 = params.launch_offset
    out = []
    for theta in prong_angles(p, zero):
        theta = _refine_launch(p, alpha, r0, theta)
        start = alpha + r0 * np.exp(1j * theta)
        v0 = np.sqrt(complex(p(start)))
        sign = 1 if (np.exp(-1j * theta) / v0).real > 0 else -1
        out.append(trace_trajectory(p, start, sign, params, origin=zero))
    return out


@dataclass(frozen=True, eq=False)
class TrajectoryStructure:
    polynomial: object
    separatrices: dict
    saddles: list
    saddle_free: bool
    zero_fan: dict
    params: TraceParams

    def to_json(self):
        return {
            "polynomial": self.polynomial.to_json(),
            "saddle_free": self.saddle_free,
            "zero_fan": {str(i): list(f) if f is not None else None
                         for i, f in self.zero_fan.items()},
            "saddles": [[i, j] for i, j, _ in self.saddles],
            "separatrices": {str(i): [t.to_json() for t in ts]
                             for i, ts in self.separatrices.items()},
        }


def classify(p, params=None):
    """Trace all 3(n+1) separatrices and record saddles and terminal directions."""
    params = params or TraceParams.for_polynomial(p)
    seps = {}
    saddles = []
    seen = set()
    fans = {}
    m = p.m
    margin = np.pi / m - params.angular_tol
    for i in range(len(p.roots)):
        trajs = separatrices(p, i, params)
        seps[i] = trajs
        fan = []
        for t in trajs:
            term = t.terminus
            if isinstance(term, Truncated):
                raise AmbiguousStructure(
                    f"separatrix from zero {i} exhausted its budget; raise max_w_length")
            if isinstance(term, Zero):
                pair = tuple(sorted((i, term.index)))
                if pair not in seen:
                    seen.add(pair)
                    saddles.append((i, term.index, t))
                fan.append(None)
            else:
                if t.terminal_deviation > margin:
                    raise AmbiguousStructure(
                        f"separatrix from zero {i} ends {t.terminal_deviation:.3g} rad off "
                        f"direction {term.k}, too close to a sector boundary")
                fan.append(term.k)
        fans[i] = tuple(fan) if None not in fan else None
    return TrajectoryStructure(p, seps, saddles, not saddles, fans, params)


def fan_is_cyclic(fan, m):
    """Directions listed by launch angle appear in counterclockwise cyclic order."""
    k0, k1, k2 = fan
    if len({k0, k1, k2}) < 3:
        return False
    return ((k1 - k0) % m) + ((k2 - k1) % m) + ((k0 - k2) % m) == m


def triangulation_from_fans(m, fans):
    """Validate that the fan triangles tile the m-gon and return the ideal triangulation."""
    tris = []
    for i, fan in fans.items():
        if fan is None or len(set(fan)) != 3:
            raise StructureInconsistent(f"zero {i} has a degenerate fan {fan}")
        tris.append(tuple(sorted(fan)))
    count = Counter()
    for t in tris:
        for e in combinations(t, 2):
            count[_arc(*e)] += 1
    arcs = sorted(e for e in count if not is_boundary(m, *e))
    boundary = [_arc(i, (i + 1) % m) for i in range(m)]
    problems = []
    if len(arcs) != m - 3:
        problems.append(f"{len(arcs)} arcs instead of {m - 3}")
    if any(count[e] != 2 for e in arcs):
        problems.append("an arc is not shared by exactly two triangles")
    if any(count[b] != 1 for b in boundary):
        problems.append("a boundary segment is not covered exactly once")
    if any(crosses(a, b) for a, b in combinations(arcs, 2)):
        problems.append("arcs cross")
    if len(set(tris)) != len(tris):
        problems.append("repeated triangle")
    if problems:
        raise StructureInconsistent("fan triangles do not tile the polygon: " + "; ".join(problems))
    T = IdealTriangulation(m, arcs)
    if sorted(T.triangles) != sorted(tris):
        raise StructureInconsistent("fan triangles differ from the triangles of the arc set")
    return T


def wkb_triangulation(p, structure=None):
    """Ideal triangulation whose triangles are spanned by the separatrix endpoints of each zero."""
    structure = structure or classify(p)
    if not structure.saddle_free:
        pairs = [(i, j) for i, j, _ in structure.saddles]
        raise NotSaddleFree(f"saddle trajectories between zeros {pairs}")
    return triangulation_from_fans(p.m, structure.zero_fan)


def wall_proximity(p):
    """min over zero pairs of |Im Z| / |Z| for straight-path periods Z; +inf when n = 0."""
    k = len(p.roots)
    if k < 2:
        return float("inf")
    best = float("inf")
    for i, j in combinations(range(k), 2):
        z = period(p, i, j).value
        best = min(best, abs(z.imag) / abs(z))
    return best


def random_saddle_free(rng, n, scale=1.0, min_sep=0.2, min_wall=0.05, max_tries=200):
    """Random polynomial that classifies as saddle-free, away from walls."""
    from .polynomial import random_polynomial

    for _ in range(max_tries):
        p = random_polynomial(rng, n, scale=scale, min_sep=min_sep)
        if n > 0 and wall_proximity(p) < min_wall:
            continue
        try:
            s = classify(p)
        except AmbiguousStructure:
            continue
        if s.saddle_free:
            return p, s
    raise RuntimeError("could not draw a saddle-free sample")
