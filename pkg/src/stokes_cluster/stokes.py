"""Subdominant solutions of y'' = P(z) y and the asymptotic values w_k in each Stokes sector.

Two independent routes compute the tuple (w_0, ..., w_(n+2)):

* ``asymptotic_values``: integrate the subdominant solution Y_k inward from
  deep inside the sector and take Wronskians with the base frame;
* ``asymptotic_values_direct``: integrate the frame outward along a ray and
  watch the ratio y1/y2 settle.

Only projective data is consumed, so solutions are freely rescaled.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import _kernels
from . import projective as pj
from .cluster import normalize_points
from .errors import (
    ConvergenceCheckFailure,
    GenericityViolation,
    InputError,
    NoConvergence,
)

PROJ_TOL = 1e-7
ASYM_TOL = 1e-9
TAYLOR_ORDER = 30
STEP_FRAC = 0.8
SEED_ACTION = 40.0
MAX_DOUBLINGS = 3
DIRECT_DOUBLINGS = 6


@dataclass(frozen=True)
class SolutionFrame:
    """Initial data (y, y') of two solutions at ``base_point``; rows are y1, y2."""

    base_point: complex
    data: np.ndarray

    @classmethod
    def standard(cls, base_point=0j):
        return cls(complex(base_point), np.eye(2, dtype=complex))

    @property
    def wronskian(self):
        (y1, dy1), (y2, dy2) = self.data
        return y1 * dy2 - dy1 * y2

    def transformed(self, M):
        """Frame (y1~, y2~) = M (y1, y2)."""
        return SolutionFrame(self.base_point, np.asarray(M, dtype=complex) @ self.data)


@dataclass(frozen=True)
class SolutionValue:
    """(y, y') of a subdominant solution at the base point, up to a common scale."""

    k: int
    R: float
    base_point: complex
    y: complex
    dy: complex


@dataclass(frozen=True, eq=False)
class AsymptoticTuple:
    w: np.ndarray
    method: str
    normalized: bool = False

    @property
    def m(self):
        return self.w.shape[0]

    def values(self):
        return [pj.to_complex(p) for p in self.w]

    def to_json(self):
        return {"w": [pj.encode(p) for p in self.w], "method": self.method,
                "normalized": self.normalized}


def tuple_from_json(doc):
    return AsymptoticTuple(np.array([pj.decode(x) for x in doc["w"]]), doc["method"],
                           bool(doc.get("normalized", False)))


def sector_angle(m, k):
    return 2 * np.pi * k / m


def seed_radius(p):
    """Radius where the leading action (2/m) R^(m/2) exceeds SEED_ACTION plus three
    times the action across the root disk, so dominant contamination of the seed is
    suppressed by at least exp(-2 SEED_ACTION) at the base point."""
    m = p.m
    r_in = 1.0 + p.root_radius
    return (SEED_ACTION * m / 2 + 3 * r_in ** (m / 2)) ** (2 / m)


def _propagate(p, z_from, z_to, Y):
    out, _ = _kernels.propagate(p.coeffs, complex(z_from), complex(z_to),
                                np.asarray(Y, dtype=complex).reshape(-1, 2),
                                TAYLOR_ORDER, STEP_FRAC)
    return out


def subdominant_solution(p, k, R=None, base_point=0j):
    """Solution decaying along the central ray of sector k, evaluated at the base point.

    Seeded at R exp(2 pi i k/m) with the leading WKB data y = 1,
    y' = -sqrt(P) - P'/(4P), the branch chosen so Re of the integral of sqrt(P)
    grows outward along the ray.
    """
    m = p.m
    k = int(k) % m
    R = seed_radius(p) if R is None else float(R)
    if R <= 1.0 + p.root_radius:
        raise InputError("R must lie outside the disk containing the zeros")
    direction = np.exp(1j * sector_angle(m, k))
    zR = R * direction
    PR = complex(p(zR))
    root = np.sqrt(PR)
    if (root * direction).real < 0:
        root = -root
    dy = -root - complex(p.derivative(zR)) / (4 * PR)
    Y = _propagate(p, zR, base_point, [1.0 + 0j, dy])[0]
    return SolutionValue(k, R, complex(base_point), complex(Y[0]), complex(Y[1]))


def _wronskian_value(frame, sol):
    """w_k = W(y1, Y) : W(y2, Y) as a homogeneous pair."""
    d = frame.data
    W = d[:, 0] * sol.dy - d[:, 1] * sol.y
    return pj.normalize(W)


def asymptotic_value(p, k, frame=None, R=None, check=True):
    frame = frame or SolutionFrame.standard()
    R = seed_radius(p) if R is None else R
    w = _wronskian_value(frame, subdominant_solution(p, k, R, frame.base_point))
    if not check:
        return w
    for _ in range(MAX_DOUBLINGS):
        R *= 2
        w2 = _wronskian_value(frame, subdominant_solution(p, k, R, frame.base_point))
        if pj.chordal(w, w2) < ASYM_TOL:
            return w2
        w = w2
    raise ConvergenceCheckFailure(
        f"sector {k}: asymptotic value still moving after {MAX_DOUBLINGS} doublings of R")


def asymptotic_values(p, frame=None, check=True, genericity_tol=PROJ_TOL):
    """Tuple (w_0, ..., w_(n+2)) from Wronskians of the frame with each subdominant solution.

    ``genericity_tol`` is the chordal distance below which two values count as
    coincident in the Sibuya check; pass 0 to reject only exact coincidence.
    """
    frame = frame or SolutionFrame.standard()
    w = np.array([asymptotic_value(p, k, frame, check=check) for k in range(p.m)])
    t = AsymptoticTuple(w, "wronskian")
    check_sibuya(t, genericity_tol)
    return t


def asymptotic_value_direct(p, k, frame=None, ray_offset=0.0, tol=ASYM_TOL):
    """Limit of y1/y2 along the ray at angle 2 pi k/m + ray_offset from the base point."""
    frame = frame or SolutionFrame.standard()
    m = p.m
    if abs(ray_offset) >= np.pi / m:
        raise InputError("ray must stay inside the open Stokes sector")
    direction = np.exp(1j * (sector_angle(m, k) + ray_offset))
    b = frame.base_point
    r = seed_radius(p)
    z = b + r * direction
    Y = _propagate(p, b, z, frame.data)
    prev = pj.normalize(Y[:, 0])
    for _ in range(DIRECT_DOUBLINGS):
        z_next = b + 2 * (z - b)
        Y = _propagate(p, z, z_next, Y)
        z = z_next
        cur = pj.normalize(Y[:, 0])
        if pj.chordal(prev, cur) < tol:
            return cur
        prev = cur
    raise NoConvergence(f"sector {k}: y1/y2 has not settled by |z| = {abs(z):.3g}")


def asymptotic_values_direct(p, frame=None, ray_offset=0.0, tol=ASYM_TOL):
    frame = frame or SolutionFrame.standard()
    w = np.array([asymptotic_value_direct(p, k, frame, ray_offset, tol) for k in range(p.m)])
    t = AsymptoticTuple(w, "projective")
    check_sibuya(t)
    return t


def sibuya_margins(t):
    """(smallest adjacent chordal distance, best three-distinct margin).

    The second number is the max over triples of the min pairwise distance, so
    both must exceed the coincidence tolerance for the tuple to be generic.
    """
    w = t.w if isinstance(t, AsymptoticTuple) else np.asarray(t)
    m = len(w)
    adjacent = min(pj.chordal(w[i], w[(i + 1) % m]) for i in range(m))
    triple = max(min(pj.chordal(w[a], w[b]), pj.chordal(w[b], w[c]), pj.chordal(w[a], w[c]))
                 for a, b, c in combinations(range(m), 3))
    return float(adjacent), float(triple)


def check_sibuya(t, tol=PROJ_TOL):
    adjacent, triple = sibuya_margins(t)
    if adjacent <= tol:
        raise GenericityViolation(f"adjacent asymptotic values coincide (distance {adjacent:.3g})")
    if triple <= tol:
        raise GenericityViolation("fewer than three distinct asymptotic values")


def normalize_tuple(t, tol=PROJ_TOL):
    """Send the first pairwise-distinct consecutive triple w_k, w_(k+1), w_(k+2) to 0, 1, inf."""
    check_sibuya(t, tol)
    w, k = normalize_points(t.w, tol)
    if w is None:
        raise GenericityViolation("no consecutive triple of distinct values")
    return AsymptoticTuple(w, t.method, True)


def tuple_distance(s, t):
    """Entrywise max chordal distance between two tuples of equal length."""
    a = s.w if isinstance(s, AsymptoticTuple) else np.asarray(s)
    b = t.w if isinstance(t, AsymptoticTuple) else np.asarray(t)
    return float(np.max(pj.chordal(a, b)))
