"""Points of CP^1 as homogeneous pairs (u : v) and the PGL2 action on them.

A point is a length-2 complex array, rescaled so that max(|u|, |v|) = 1.
Infinity is (1 : 0).  Arrays of points have shape (m, 2).
"""

import numpy as np

INF = np.array([1.0 + 0j, 0.0 + 0j])


def point(z):
    """Homogeneous pair for a complex number, ``None``/``inf`` or a pair."""
    if z is None:
        return INF.copy()
    if np.ndim(z) == 1:
        return normalize(np.asarray(z, dtype=complex))
    z = complex(z)
    if not np.isfinite(z):
        return INF.copy()
    return normalize(np.array([z, 1.0 + 0j]))


def points(values):
    return np.array([point(z) for z in values]).reshape(-1, 2)


def normalize(p):
    p = np.asarray(p, dtype=complex)
    scale = np.max(np.abs(p), axis=-1, keepdims=True)
    if np.any(scale == 0):
        raise ValueError("(0 : 0) is not a point of CP^1")
    return p / scale


def to_complex(p):
    """Affine value u/v, or ``inf``."""
    u, v = p
    if v == 0:
        return complex(np.inf, 0.0)
    return complex(u / v)


def det(p, q):
    return p[..., 0] * q[..., 1] - p[..., 1] * q[..., 0]


def chordal(p, q):
    """Chordal (Fubini-Study) distance in [0, 1]; scale-free, handles infinity."""
    p = np.asarray(p)
    q = np.asarray(q)
    return np.abs(det(p, q)) / (np.linalg.norm(p, axis=-1) * np.linalg.norm(q, axis=-1))


def apply(M, p):
    """Apply a 2x2 matrix (Mobius map) to one point or an array of points."""
    return normalize(np.einsum("ij,...j->...i", M, p))


def three_point_map(a, b, c):
    """Matrix of the Mobius map sending a, b, c to 0, 1, infinity.

    z -> det(z, a) det(b, c) / (det(z, c) det(b, a)).
    """
    dbc = det(b, c)
    dba = det(b, a)
    if dbc == 0 or dba == 0 or det(a, c) == 0:
        raise ValueError("three_point_map needs three distinct points")
    return np.array([[a[1] * dbc, -a[0] * dbc],
                     [c[1] * dba, -c[0] * dba]])


def random_mobius(rng, scale=1.0):
    M = scale * (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    while abs(np.linalg.det(M)) < 1e-3:
        M = scale * (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    return M


def encode(p):
    """JSON form [u_re, u_im, v_re, v_im]."""
    return [float(p[0].real), float(p[0].imag), float(p[1].real), float(p[1].imag)]


def decode(item):
    return normalize(np.array([complex(item[0], item[1]), complex(item[2], item[3])]))
