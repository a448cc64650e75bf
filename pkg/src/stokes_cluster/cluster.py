"""Triangulations of the (n+3)-gon, quivers with potential, mutation and
cross-ratio coordinates on configurations of points in CP^1.

Marked points are labelled 0, ..., m-1 counterclockwise.  An arc is a sorted
pair (i, j) of labels that are not cyclically adjacent.  Combinatorics use
exact integers; coordinates use complex floats.
"""

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import networkx as nx
import numpy as np

from . import projective as pj
from .errors import (
    ArcNotInTriangulation,
    InputError,
    NonGeneric,
    SizeLimit,
    TransitionPole,
)

MAX_M = 12
PROJ_TOL = 1e-7


def _arc(i, j):
    return (i, j) if i < j else (j, i)


def is_boundary(m, i, j):
    return (i - j) % m in (1, m - 1)


def crosses(a, b):
    """Two chords of a convex polygon cross in the interior."""
    i, j = a
    k, l = b
    return i < k < j < l or k < i < l < j


@dataclass(frozen=True)
class MarkedDisk:
    m: int

    def __post_init__(self):
        if self.m < 3:
            raise InputError("a marked disk needs at least 3 marked points")

    @property
    def boundary_segments(self):
        return [_arc(i, (i + 1) % self.m) for i in range(self.m)]


@dataclass(frozen=True)
class IdealTriangulation:
    """Maximal set of pairwise non-crossing diagonals of the m-gon.

    ``arcs`` is kept sorted; the position of an arc in it is its quiver vertex.
    """

    m: int
    arcs: tuple

    def __init__(self, m, arcs, check=True):
        arcs = tuple(sorted(_arc(int(i), int(j)) for i, j in arcs))
        object.__setattr__(self, "m", int(m))
        object.__setattr__(self, "arcs", arcs)
        if check:
            self.validate()

    def validate(self):
        m = self.m
        if m < 3:
            raise InputError("m must be at least 3")
        if len(set(self.arcs)) != len(self.arcs):
            raise InputError(f"repeated arc in {self.arcs}")
        for i, j in self.arcs:
            if not (0 <= i < m and 0 <= j < m) or i == j or is_boundary(m, i, j):
                raise InputError(f"({i}, {j}) is not an arc of the {m}-gon")
        for a, b in combinations(self.arcs, 2):
            if crosses(a, b):
                raise InputError(f"arcs {a} and {b} cross")
        if len(self.arcs) != m - 3:
            raise InputError(f"a triangulation of the {m}-gon has {m - 3} arcs, got {len(self.arcs)}")

    @property
    def n(self):
        return self.m - 3

    def edges(self):
        return set(self.arcs) | set(MarkedDisk(self.m).boundary_segments)

    @property
    def triangles(self):
        return _triangles(self.m, self.arcs)

    def index(self, arc):
        arc = _arc(*arc)
        try:
            return self.arcs.index(arc)
        except ValueError:
            raise ArcNotInTriangulation(f"{arc} is not an arc of {self.arcs}") from None

    def shifted(self, k):
        """Relabel every marked point i -> i + k mod m."""
        return IdealTriangulation(self.m, [((i + k) % self.m, (j + k) % self.m) for i, j in self.arcs])

    def to_json(self):
        return [list(a) for a in self.arcs]

    def __iter__(self):
        return iter(self.arcs)


@lru_cache(maxsize=None)
def _triangles(m, arcs):
    edges = set(arcs) | {_arc(i, (i + 1) % m) for i in range(m)}
    tris = [t for t in combinations(range(m), 3)
            if _arc(t[0], t[1]) in edges and _arc(t[1], t[2]) in edges and _arc(t[0], t[2]) in edges]
    return tuple(tris)


def triangulation_from_json(m, doc):
    return IdealTriangulation(m, [tuple(a) for a in doc])


def fan_triangulation(m, apex=0):
    return IdealTriangulation(m, [(apex, (apex + k) % m) for k in range(2, m - 1)])


def all_triangulations(m):
    """Every triangulation of the m-gon (Catalan number C_(m-2) of them)."""
    if m < 3:
        raise InputError("m must be at least 3")
    if m > MAX_M:
        raise SizeLimit(f"enumeration is limited to m <= {MAX_M}")
    return [IdealTriangulation(m, arcs, check=False) for arcs in _enumerate(tuple(range(m)))]


def _enumerate(poly):
    """Arc sets triangulating the convex polygon with vertex labels ``poly`` (in order)."""
    if len(poly) <= 3:
        return [()]
    first, last = poly[0], poly[-1]
    out = []
    # the side (first, last) lies in exactly one triangle (first, poly[k], last)
    for k in range(1, len(poly) - 1):
        left, right = poly[:k + 1], poly[k:]
        new = []
        if k > 1:
            new.append(_arc(first, poly[k]))
        if k < len(poly) - 2:
            new.append(_arc(poly[k], last))
        for a in _enumerate(left):
            for b in _enumerate(right):
                out.append(tuple(sorted(new + list(a) + list(b))))
    return out


def flip(T, k):
    """Replace arc k by the other diagonal of the quadrilateral around it."""
    k = _arc(*k)
    idx = T.index(k)
    a, c = k
    others = [t for t in T.triangles if a in t and c in t]
    if len(others) != 2:
        raise ArcNotInTriangulation(f"{k} does not bound two triangles")
    b, d = [next(v for v in t if v not in k) for t in others]
    arcs = list(T.arcs)
    arcs[idx] = _arc(b, d)
    return IdealTriangulation(T.m, arcs)


def flip_with_index(T, k):
    """Flip at k; also return the position of the new arc in the new triangulation."""
    T2 = flip(T, k)
    new = (set(T2.arcs) - set(T.arcs)).pop()
    return T2, T2.index(new)


def arc_bijection(T, k):
    """Map positions in T to positions in flip(T, k); the flipped arc maps to the new arc."""
    T2, new_idx = flip_with_index(T, k)
    kk = T.index(k)
    return T2, {i: (new_idx if i == kk else T2.index(a)) for i, a in enumerate(T.arcs)}


def exchange_graph(m):
    """Flip graph on all triangulations of the m-gon (networkx Graph)."""
    tris = all_triangulations(m)
    G = nx.Graph()
    for T in tris:
        G.add_node(T.arcs)
    for T in tris:
        for k in T.arcs:
            G.add_edge(T.arcs, flip(T, k).arcs, arc=k)
    return G


def exchange_graph_dot(m):
    G = exchange_graph(m)
    names = {v: f"T{i}" for i, v in enumerate(sorted(G.nodes))}
    lines = [f"graph exchange_{m} {{"]
    for v in sorted(G.nodes):
        label = " ".join(f"{i}-{j}" for i, j in v) or "empty"
        lines.append(f'  {names[v]} [label="{label}"];')
    for u, v in sorted((min(e), max(e)) for e in G.edges):
        lines.append(f"  {names[u]} -- {names[v]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Quiver:
    """Skew-symmetric exchange matrix; eps[i, j] > 0 means eps[i, j] arrows i -> j."""

    eps: np.ndarray

    @property
    def vertices(self):
        return list(range(self.eps.shape[0]))

    def __eq__(self, other):
        return isinstance(other, Quiver) and np.array_equal(self.eps, other.eps)

    def __hash__(self):
        return hash(self.eps.tobytes())

    def arrows(self):
        return [(i, j) for i in self.vertices for j in self.vertices
                for _ in range(max(0, int(self.eps[i, j])))]


def _ccw(tri):
    """Vertices of a triangle (a, b, c), a < b < c, are already counterclockwise."""
    return tuple(sorted(tri))


def quiver_of(T):
    """Quiver of a triangulation: in each triangle, arrows run clockwise about the
    common vertex of two arcs.

    For a counterclockwise triangle (x, y, z) the rotation about y from side xy
    to side yz is clockwise, so the arrows are xy -> yz -> zx -> xy.
    """
    nv = len(T.arcs)
    eps = np.zeros((nv, nv), dtype=np.int64)
    pos = {a: i for i, a in enumerate(T.arcs)}
    for tri in T.triangles:
        x, y, z = _ccw(tri)
        sides = [_arc(x, y), _arc(y, z), _arc(z, x)]
        for s in range(3):
            i, j = sides[s], sides[(s + 1) % 3]
            if i in pos and j in pos:
                eps[pos[i], pos[j]] += 1
                eps[pos[j], pos[i]] -= 1
    return Quiver(eps)


@dataclass(frozen=True)
class PotentialCycles:
    cycles: tuple

    def __len__(self):
        return len(self.cycles)


def potential_of(T):
    """One oriented 3-cycle (as arc positions, in arrow order) per internal triangle."""
    pos = {a: i for i, a in enumerate(T.arcs)}
    cycles = []
    for tri in T.triangles:
        x, y, z = _ccw(tri)
        sides = [_arc(x, y), _arc(y, z), _arc(z, x)]
        if all(s in pos for s in sides):
            cycles.append(tuple(pos[s] for s in sides))
    return PotentialCycles(tuple(cycles))


def mutate_quiver(Q, k):
    """Matrix mutation: eps'_ij = -eps_ij if k in {i, j}, else
    eps_ij + sgn(eps_ik) max(0, eps_ik eps_kj)."""
    e = Q.eps
    nv = e.shape[0]
    if not 0 <= k < nv:
        raise InputError(f"vertex {k} out of range")
    out = e.copy()
    for i in range(nv):
        for j in range(nv):
            if i == k or j == k:
                out[i, j] = -e[i, j]
            else:
                out[i, j] = e[i, j] + np.sign(e[i, k]) * max(0, e[i, k] * e[k, j])
    return Quiver(out)


# ---------------------------------------------------------------- configurations


@dataclass(frozen=True, eq=False)
class Configuration:
    """Map from marked points to CP^1, stored as an (m, 2) array of homogeneous pairs."""

    points: np.ndarray

    def __init__(self, pts):
        pts = np.asarray(pts)
        if pts.ndim == 1:
            pts = pj.points(pts)
        object.__setattr__(self, "points", pj.normalize(pts))

    @property
    def m(self):
        return self.points.shape[0]

    def values(self):
        return [pj.to_complex(p) for p in self.points]

    def shifted(self, k):
        """Configuration psi' with psi'(i) = psi(i - k)."""
        return Configuration(np.roll(self.points, k, axis=0))

    def to_json(self):
        return [pj.encode(p) for p in self.points]


def quadrilateral(T, j):
    """(p1, p2, p3, p4) counterclockwise around arc j, p1 the smaller endpoint."""
    a, c = _arc(*j)
    T.index((a, c))
    tris = [t for t in T.triangles if a in t and c in t]
    b = next(v for t in tris for v in t if v not in (a, c) and a < v < c)
    d = next(v for t in tris for v in t if v not in (a, c) and not a < v < c)
    return a, b, c, d


def cross_ratio_points(z1, z2, z3, z4):
    """(z1 - z2)(z3 - z4) / ((z2 - z3)(z1 - z4)) on homogeneous pairs."""
    num = pj.det(z1, z2) * pj.det(z3, z4)
    den = pj.det(z2, z3) * pj.det(z1, z4)
    return num, den


def cross_ratio(c, T, j):
    p1, p2, p3, p4 = quadrilateral(T, j)
    P = c.points
    num, den = cross_ratio_points(P[p1], P[p2], P[p3], P[p4])
    if num == 0 or den == 0:
        raise NonGeneric(f"cross ratio on arc {_arc(*j)} is degenerate", arc=_arc(*j))
    X = complex(num / den)
    if not np.isfinite(X) or X == 0:
        raise NonGeneric(f"cross ratio on arc {_arc(*j)} is not in C*", arc=_arc(*j))
    return X


@dataclass(frozen=True, eq=False)
class ClusterChart:
    triangulation: IdealTriangulation
    X: np.ndarray

    def __post_init__(self):
        X = np.asarray(self.X, dtype=complex)
        object.__setattr__(self, "X", X)
        if X.shape != (len(self.triangulation.arcs),):
            raise InputError("one coordinate per arc is required")
        if np.any(X == 0) or not np.all(np.isfinite(X)):
            raise InputError("cluster coordinates must lie in C*")

    @property
    def arcs(self):
        return self.triangulation.arcs

    def __getitem__(self, arc):
        return self.X[self.triangulation.index(arc)]

    @property
    def quiver(self):
        return quiver_of(self.triangulation)

    def to_json(self):
        return {"arcs": self.triangulation.to_json(),
                "X": [[float(x.real), float(x.imag)] for x in self.X]}


def chart_from_json(m, doc):
    T = IdealTriangulation(m, [tuple(a) for a in doc["arcs"]])
    return ClusterChart(T, [complex(re, im) for re, im in doc["X"]])


def chart_coords(c, T):
    if c.m != T.m:
        raise InputError("configuration and triangulation sizes differ")
    return ClusterChart(T, [cross_ratio(c, T, j) for j in T.arcs])


def _solve_fourth(z1, z2, z3, X):
    """Point z4 with cross_ratio(z1, z2, z3, z4) = X, given z1, z2, z3 distinct."""
    g = pj.three_point_map(z1, z2, z3)
    # in the frame (0, 1, inf, x) the cross ratio is -1/x
    target = pj.normalize(np.array([-1.0 + 0j, X]))
    return pj.normalize(np.linalg.solve(g, target))


def reconstruct(T, chart, seed=None):
    """Configuration realizing the chart; the first triangle is placed at ``seed``
    (default 0, 1, infinity) and the rest is propagated across arcs."""
    if isinstance(chart, ClusterChart):
        X = chart.X
    else:
        X = np.asarray(chart, dtype=complex)
    m = T.m
    pts = [None] * m
    tris = T.triangles
    t0 = tris[0]
    seed = pj.points([0, 1, None]) if seed is None else pj.points(seed)
    for v, s in zip(t0, seed):
        pts[v] = s
    pos = {a: i for i, a in enumerate(T.arcs)}
    queue = deque([t0])
    seen = {t0}
    while queue:
        t = queue.popleft()
        for e in combinations(t, 2):
            e = _arc(*e)
            if e not in pos:
                continue
            for t2 in tris:
                if t2 in seen or e[0] not in t2 or e[1] not in t2:
                    continue
                p1, p2, p3, p4 = quadrilateral(T, e)
                Xj = X[pos[e]]
                if pts[p4] is None:
                    pts[p4] = _solve_fourth(pts[p1], pts[p2], pts[p3], Xj)
                else:
                    # (p3, p4, p1, p2) labels the same quadrilateral
                    pts[p2] = _solve_fourth(pts[p3], pts[p4], pts[p1], Xj)
                seen.add(t2)
                queue.append(t2)
    return Configuration(np.array(pts))


def mutate_coords(chart, k):
    """Cluster transformation at arc k; returns the chart on flip(T, k)."""
    T = chart.triangulation
    kk = T.index(k)
    Xk = chart.X[kk]
    if abs(Xk + 1) <= 1e-12:
        raise TransitionPole(f"X = -1 on arc {_arc(*k)}: the transition has a pole")
    eps = quiver_of(T).eps
    Xn = np.empty_like(chart.X)
    for j, Xj in enumerate(chart.X):
        if j == kk:
            Xn[j] = 1.0 / Xk
        else:
            e = int(eps[j, kk])
            Xn[j] = Xj * (1 + Xk ** (-np.sign(e))) ** (-e)
    T2, bij = arc_bijection(T, k)
    out = np.empty_like(Xn)
    for i, v in enumerate(Xn):
        out[bij[i]] = v
    return ClusterChart(T2, out)


# ---------------------------------------------------------------- genericity


def _distinct(p, q, tol):
    return pj.chordal(p, q) > tol


def is_generic(c, T, tol=PROJ_TOL):
    P = c.points
    return all(_distinct(P[i], P[j], tol) for i, j in T.edges())


def satisfies_sibuya(c, tol=PROJ_TOL):
    """Adjacent marked points carry distinct values and at least three values are distinct."""
    P = c.points
    m = len(P)
    if not all(_distinct(P[i], P[(i + 1) % m], tol) for i in range(m)):
        return False
    return len(_clusters(P, tol)) >= 3


def _clusters(P, tol):
    reps = []
    for p in P:
        if all(_distinct(p, r, tol) for r in reps):
            reps.append(p)
    return reps


def find_generic_triangulation(c, tol=PROJ_TOL):
    """Triangulation w.r.t. which c is generic, built by ear removal; None if c is not generic."""
    if not satisfies_sibuya(c, tol):
        return None
    P = c.points
    arcs = []
    poly = list(range(c.m))
    while len(poly) > 3:
        L = len(poly)
        for k in range(L):
            if _distinct(P[poly[k - 1]], P[poly[(k + 1) % L]], tol):
                break
        else:
            return None
        rest = [v for i, v in enumerate(poly) if i != k]
        if len(_clusters(P[rest], tol)) >= 3:
            arcs.append(_arc(poly[k - 1], poly[(k + 1) % L]))
            poly = rest
        else:
            apex = poly[k]
            arcs.extend(_arc(apex, v) for v in poly
                        if v != apex and not is_boundary(c.m, apex, v)
                        and v not in (poly[k - 1], poly[(k + 1) % L]))
            poly = []
            break
    T = IdealTriangulation(c.m, arcs)
    return T if is_generic(c, T, tol) else None


def normalize_points(P, tol=0.0):
    """Apply the Mobius map sending the first pairwise-distinct consecutive triple to (0, 1, inf).

    Returns (normalized points, k) where k is the index of that triple.
    """
    m = len(P)
    for k in range(m):
        a, b, c = P[k], P[(k + 1) % m], P[(k + 2) % m]
        if min(pj.chordal(a, b), pj.chordal(b, c), pj.chordal(a, c)) > tol:
            g = pj.three_point_map(a, b, c)
            return pj.apply(g, P), k
    return None, -1


def random_configuration(rng, m):
    """Random generic configuration with finite values drawn from a Gaussian."""
    z = rng.normal(size=m) + 1j * rng.normal(size=m)
    return Configuration(z)


def random_chart(rng, T, spread=2.0):
    mod = np.exp(spread * rng.uniform(-1, 1, size=len(T.arcs)))
    arg = rng.uniform(-np.pi, np.pi, size=len(T.arcs))
    return ClusterChart(T, mod * np.exp(1j * arg))
