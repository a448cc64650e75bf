"""Normalized polynomials P(z) = z^(n+1) + a_(n-1) z^(n-1) + ... + a_0.

The coefficient vector (a_0, ..., a_(n-1)) is a point of C^n minus the
discriminant; it parametrizes framed quadratic differentials P(z) dz^2 with
simple zeros and a single pole at infinity.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BranchTrackingFailure,
    ConvergenceFailure,
    DimensionMismatch,
    DiscriminantViolation,
    PreconditionViolation,
)

ROOT_SEP_REL = 1e-6
ROOT_RESIDUAL_REL = 1e-10


@dataclass(frozen=True)
class RootSet:
    roots: np.ndarray
    sep: float

    def __len__(self):
        return len(self.roots)

    def to_json(self):
        return {"roots": [[float(r.real), float(r.imag)] for r in self.roots],
                "sep": float(self.sep)}


@dataclass(frozen=True, eq=False)
class Polynomial:
    """Monic, centred polynomial of degree n+1 with simple roots.

    Build instances with :func:`from_coefficients`; the constructor runs root
    finding and checks the simple-root invariant.
    """

    n: int
    a: tuple
    rootset: RootSet = field(repr=False, compare=False)

    @property
    def degree(self):
        return self.n + 1

    @property
    def m(self):
        """Number of marked points / Stokes sectors."""
        return self.n + 3

    @property
    def coeffs(self):
        """Monic coefficients, highest degree first (numpy.polyval order)."""
        c = np.zeros(self.n + 2, dtype=complex)
        c[0] = 1.0
        for j, aj in enumerate(self.a):
            c[self.n + 1 - j] = aj
        return c

    @property
    def roots(self):
        return self.rootset.roots

    @property
    def sep(self):
        return self.rootset.sep

    @property
    def root_radius(self):
        return float(np.max(np.abs(self.roots)))

    def __call__(self, z):
        return np.polyval(self.coeffs, z)

    def derivative(self, z):
        return np.polyval(np.polyder(self.coeffs), z)

    def __eq__(self, other):
        return (isinstance(other, Polynomial) and self.n == other.n
                and np.array_equal(np.asarray(self.a), np.asarray(other.a)))

    def __hash__(self):
        return hash((self.n, self.a))

    def to_json(self):
        return {"n": self.n, "a": [[float(c.real), float(c.imag)] for c in self.a]}


def from_coefficients(n, a):
    """Validate (a_0, ..., a_(n-1)) and return the corresponding Polynomial."""
    if int(n) != n or n < 0:
        raise DimensionMismatch(f"rank n must be a non-negative integer, got {n!r}")
    n = int(n)
    a = tuple(complex(x) for x in np.asarray(a, dtype=complex).ravel())
    if len(a) != n:
        raise DimensionMismatch(f"expected {n} coefficients, got {len(a)}")
    if not all(np.isfinite(x) for x in a):
        raise DimensionMismatch("coefficients must be finite")
    c = np.zeros(n + 2, dtype=complex)
    c[0] = 1.0
    for j, aj in enumerate(a):
        c[n + 1 - j] = aj
    rts = _find_roots(c)
    sep = _min_separation(rts)
    tol = ROOT_SEP_REL * (1.0 + float(np.max(np.abs(rts))))
    if len(rts) > 1 and sep <= tol:
        raise DiscriminantViolation(
            f"roots are not simple: min separation {sep:.3g} <= {tol:.3g}")
    return Polynomial(n, a, RootSet(rts, sep))


def from_roots(roots):
    """Polynomial with the given roots (they must sum to zero)."""
    roots = np.asarray(roots, dtype=complex)
    if abs(roots.sum()) > 1e-12 * (1 + np.abs(roots).max()):
        raise PreconditionViolation("roots must sum to zero")
    c = np.poly(roots)
    n = len(roots) - 1
    return from_coefficients(n, [c[n + 1 - j] for j in range(n)])


def from_json(doc):
    return from_coefficients(doc["n"], [complex(re, im) for re, im in doc["a"]])


def roots(p):
    return p.rootset


def _min_separation(rts):
    if len(rts) < 2:
        return float("inf")
    d = np.abs(rts[:, None] - rts[None, :])
    d[np.diag_indices(len(rts))] = np.inf
    return float(d.min())


def _sort_roots(rts):
    scale = 1.0 + np.max(np.abs(rts))
    key_re = np.round(rts.real / scale, 9)
    order = np.lexsort((rts.imag, key_re))
    return rts[order]


def _find_roots(c, max_iters=500):
    """Aberth-Ehrlich simultaneous iteration; c is monic, highest first."""
    d = len(c) - 1
    if d == 1:
        return np.array([-c[1] / c[0]])
    dc = np.polyder(c)
    # Fujiwara-type bound for the initial circle
    mags = [abs(c[k]) ** (1.0 / k) for k in range(1, d + 1) if c[k] != 0]
    radius = 2.0 * max(mags) if mags else 1.0
    rng = np.random.default_rng(20240611)
    angles = 2 * np.pi * (np.arange(d) + 0.25) / d + 0.4 + 0.01 * rng.standard_normal(d)
    z = radius * np.exp(1j * angles) * (1 + 0.01 * rng.standard_normal(d))
    converged = False
    for _ in range(max_iters):
        pz = np.polyval(c, z)
        dpz = np.polyval(dc, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = pz / dpz
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            s = inv.sum(axis=1)
            step = ratio / (1 - ratio * s)
        step = np.where(np.isfinite(step), step, 0.0)
        z = z - step
        if np.all(np.abs(step) <= 4e-16 * (1 + np.abs(z))):
            converged = True
            break
    # two Newton polishing sweeps
    for _ in range(2):
        dpz = np.polyval(dc, z)
        safe = np.abs(dpz) > 0
        z = np.where(safe, z - np.polyval(c, z) / np.where(safe, dpz, 1.0), z)
    absz = np.abs(z)
    scale = sum(abs(c[k]) * absz ** (d - k) for k in range(d + 1))
    residual = np.abs(np.polyval(c, z))
    if not converged and np.any(residual > ROOT_RESIDUAL_REL * scale):
        raise ConvergenceFailure(
            f"root iteration did not converge in {max_iters} iterations "
            f"(max residual {residual.max():.3g})")
    if np.any(residual > ROOT_RESIDUAL_REL * np.maximum(scale, 1.0)):
        raise ConvergenceFailure(f"root residual {residual.max():.3g} above tolerance")
    return _sort_roots(z)


def scale_action(t, p):
    """C^* action t.(a_0, ..., a_(n-1)) = (t^(n+1) a_0, t^n a_1, ..., t^2 a_(n-1)).

    Roots of the result are t times the roots of p.
    """
    t = complex(t)
    if t == 0:
        raise PreconditionViolation("t must be nonzero")
    n = p.n
    return from_coefficients(n, [t ** (n + 1 - j) * aj for j, aj in enumerate(p.a)])


def rotation_root(n):
    return np.exp(2j * np.pi / (n + 3))


def rotate_framing(p):
    """Generator of the Z/(n+3) framing action: the C^* action at omega = exp(2 pi i/(n+3)).

    The new coefficients are omega^(-(j+2)) a_j and the roots are omega times the
    old roots, so the separatrix fan and the asymptotic values move one sector
    counterclockwise (marked-point labels shift by +1).
    """
    return scale_action(rotation_root(p.n), p)


@dataclass(frozen=True)
class Period:
    from_zero: int
    to_zero: int
    value: complex
    path: np.ndarray

    def to_json(self):
        return {"from_zero": self.from_zero, "to_zero": self.to_zero,
                "value": [self.value.real, self.value.imag],
                "path": [[float(z.real), float(z.imag)] for z in self.path]}


def period_path(p, i, j):
    """Integration path [alpha_i, mid, alpha_j] between two roots.

    Straight unless another root comes within 0.05 sep of the segment, in which
    case the midpoint is pushed 0.1 sep perpendicular, away from that root.
    """
    rts = p.roots
    a, b = rts[i], rts[j]
    mid = 0.5 * (a + b)
    others = [rts[k] for k in range(len(rts)) if k not in (i, j)]
    if others:
        d = b - a
        s = np.clip([((z - a) * np.conj(d)).real / abs(d) ** 2 for z in others], 0, 1)
        dist = np.abs(np.array(others) - (a + s * d))
        k = int(np.argmin(dist))
        if dist[k] < 0.05 * p.sep:
            normal = 1j * d / abs(d)
            side = ((others[k] - mid) * np.conj(normal)).real
            mid = mid - np.sign(side if side != 0 else 1.0) * 0.1 * p.sep * normal
    return np.array([a, mid, b])


_GL_X, _GL_W = np.polynomial.legendre.leggauss(20)


def _half_integral(p, start, end, v0, panels):
    """Integral of a tracked sqrt(P) from start to end, branch v0 at start.

    Uses s = (1 - cos theta)/2 so the square-root endpoint singularity at a
    root becomes smooth.  Returns (value, ok) where ok reports branch
    continuity (consecutive samples within pi/2 in argument).
    """
    edges = np.linspace(0.0, np.pi, panels + 1)
    lo, hi = edges[:-1, None], edges[1:, None]
    theta = (0.5 * (hi - lo) * _GL_X[None, :] + 0.5 * (hi + lo)).ravel()
    weight = (0.5 * (hi - lo) * _GL_W[None, :]).ravel()
    s = 0.5 * (1 - np.cos(theta))
    z = start + (end - start) * s
    roots_ = np.sqrt(p(z).astype(complex))
    tracked = np.empty_like(roots_)
    prev = v0
    ok = True
    for idx, r in enumerate(roots_):
        cand = r if abs(r - prev) <= abs(r + prev) else -r
        if prev != 0 and cand != 0 and abs(np.angle(cand / prev)) >= np.pi / 2:
            ok = False
        tracked[idx] = cand
        prev = cand
    dz = (end - start) * 0.5 * np.sin(theta)
    return np.sum(weight * tracked * dz), ok


def period(p, i, j, rtol=1e-13, max_panels=512):
    """Integral of sqrt(P) dz from root i to root j along a branch-tracked path.

    The branch is the principal square root at the path midpoint, so
    ``period(p, i, j).value == -period(p, j, i).value``.
    """
    k = len(p.roots)
    if not (0 <= i < k and 0 <= j < k):
        raise PreconditionViolation(f"root indices out of range: {i}, {j}")
    if i == j:
        raise PreconditionViolation("period needs two distinct zeros")
    path = period_path(p, i, j)
    a, mid, b = path
    v0 = np.sqrt(complex(p(mid)))
    panels = 2
    prev_value = None
    while panels <= max_panels:
        to_b, ok_b = _half_integral(p, mid, b, v0, panels)
        to_a, ok_a = _half_integral(p, mid, a, v0, panels)
        value = to_b - to_a
        if ok_a and ok_b and prev_value is not None:
            if abs(value - prev_value) <= rtol * max(abs(value), 1e-300):
                return Period(i, j, complex(value), path)
        prev_value = value if (ok_a and ok_b) else None
        panels *= 2
    if prev_value is None:
        raise BranchTrackingFailure(f"could not track sqrt(P) between zeros {i} and {j}")
    raise ConvergenceFailure(f"period quadrature between zeros {i} and {j} did not converge")


def random_polynomial(rng, n, scale=1.0, min_sep=0.1):
    """Random coefficients in the disk of radius ``scale``, rejecting near-discriminant draws."""
    while True:
        r = scale * np.sqrt(rng.uniform(size=n))
        a = r * np.exp(2j * np.pi * rng.uniform(size=n))
        try:
            p = from_coefficients(n, a)
        except DiscriminantViolation:
            continue
        if n == 0 or p.sep >= min_sep:
            return p
