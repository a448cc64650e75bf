"""Compiled inner loops: horizontal-trajectory stepping and Taylor propagation of y'' = P y.

Coefficient arrays are monic, highest degree first.
"""

import numpy as np
from numba import njit

# Dormand-Prince 5(4) tableau
_C2, _C3, _C4, _C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
_E1, _E3, _E4, _E5, _E6, _E7 = (71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200,
                                22 / 525, -1 / 40)

ESCAPED, HIT_ZERO, TRUNCATED, BRANCH_FAIL, STEP_LIMIT = 0, 1, 2, 3, 4


@njit(cache=True)
def _poly(c, z):
    acc = 0j
    for k in range(c.shape[0]):
        acc = acc * z + c[k]
    return acc


@njit(cache=True)
def _poly_and_deriv(c, z):
    p = 0j
    dp = 0j
    for k in range(c.shape[0]):
        dp = dp * z + p
        p = p * z + c[k]
    return p, dp


@njit(cache=True)
def _rhs(c, sgn, z, v):
    _, dp = _poly_and_deriv(c, z)
    return sgn / v, sgn * dp / (2.0 * v * v)


@njit(cache=True)
def trace(c, roots, z0, v0, sgn, escape_radius, exclusion, max_w, rtol, atol, max_steps):
    """Integrate dz/ds = sgn/v, dv/ds = sgn P'/(2 v^2) with v^2 = P tracked.

    After every accepted step v is projected onto the square root of P(z)
    nearest to the extrapolated value (branch continuity).  Returns
    (points, branch values, count, status, hit root index, arc length in w).
    """
    zs = np.empty(max_steps + 1, dtype=np.complex128)
    vs = np.empty(max_steps + 1, dtype=np.complex128)
    zs[0] = z0
    vs[0] = v0
    z = z0
    v = v0
    s = 0.0
    count = 1
    # initial step: a small fraction of the distance to the nearest root, in w units
    dmin = 1e300
    for r in roots:
        d = abs(z - r)
        if d < dmin:
            dmin = d
    h = 0.01 * dmin * abs(v)
    k1z, k1v = _rhs(c, sgn, z, v)
    while True:
        if count > max_steps:
            return zs, vs, count, STEP_LIMIT, -1, s
        if s + h > max_w:
            h = max_w - s
        k2z, k2v = _rhs(c, sgn, z + h * (_A21 * k1z), v + h * (_A21 * k1v))
        k3z, k3v = _rhs(c, sgn, z + h * (_A31 * k1z + _A32 * k2z),
                        v + h * (_A31 * k1v + _A32 * k2v))
        k4z, k4v = _rhs(c, sgn, z + h * (_A41 * k1z + _A42 * k2z + _A43 * k3z),
                        v + h * (_A41 * k1v + _A42 * k2v + _A43 * k3v))
        k5z, k5v = _rhs(c, sgn, z + h * (_A51 * k1z + _A52 * k2z + _A53 * k3z + _A54 * k4z),
                        v + h * (_A51 * k1v + _A52 * k2v + _A53 * k3v + _A54 * k4v))
        k6z, k6v = _rhs(c, sgn,
                        z + h * (_A61 * k1z + _A62 * k2z + _A63 * k3z + _A64 * k4z + _A65 * k5z),
                        v + h * (_A61 * k1v + _A62 * k2v + _A63 * k3v + _A64 * k4v + _A65 * k5v))
        zn = z + h * (_B1 * k1z + _B3 * k3z + _B4 * k4z + _B5 * k5z + _B6 * k6z)
        vn = v + h * (_B1 * k1v + _B3 * k3v + _B4 * k4v + _B5 * k5v + _B6 * k6v)
        k7z, k7v = _rhs(c, sgn, zn, vn)
        ez = h * (_E1 * k1z + _E3 * k3z + _E4 * k4z + _E5 * k5z + _E6 * k6z + _E7 * k7z)
        ev = h * (_E1 * k1v + _E3 * k3v + _E4 * k4v + _E5 * k5v + _E6 * k6v + _E7 * k7v)
        sz = atol + rtol * max(abs(z), abs(zn))
        sv = atol + rtol * max(abs(v), abs(vn))
        err = max(abs(ez) / sz, abs(ev) / sv)
        if not (err == err):
            err = 1e10
        if err <= 1.0:
            # project onto the nearest branch of sqrt(P)
            root = np.sqrt(_poly(c, zn))
            dp = abs(root - vn)
            dm = abs(root + vn)
            if dm < dp:
                root = -root
                dp, dm = dm, dp
            if dp > 0.25 * dm:
                return zs, vs, count, BRANCH_FAIL, -1, s
            z = zn
            v = root
            s += h
            zs[count] = z
            vs[count] = v
            count += 1
            k1z, k1v = _rhs(c, sgn, z, v)
            if abs(z) > escape_radius:
                return zs, vs, count, ESCAPED, -1, s
            for i in range(roots.shape[0]):
                if abs(z - roots[i]) < exclusion:
                    return zs, vs, count, HIT_ZERO, i, s
            if s >= max_w:
                return zs, vs, count, TRUNCATED, -1, s
            fac = 0.9 * err ** -0.2 if err > 0 else 5.0
            h *= min(5.0, max(0.2, fac))
        else:
            h *= max(0.1, 0.9 * err ** -0.2)
            if h < 1e-300:
                return zs, vs, count, STEP_LIMIT, -1, s


@njit(cache=True)
def taylor_shift(c, z0):
    """Coefficients q_l of P(z0 + x) = sum q_l x^l (lowest first), by repeated synthetic division."""
    d = c.shape[0] - 1
    work = c.copy()
    q = np.empty(d + 1, dtype=np.complex128)
    size = d + 1
    for l in range(d + 1):
        acc = work[0]
        for k in range(1, size):
            acc = acc * z0 + work[k]
            work[k] = acc
        q[l] = work[size - 1] if size > 1 else work[0]
        size -= 1
    return q


@njit(cache=True)
def propagate(c, z_from, z_to, Y, order, step_frac):
    """Carry solutions of y'' = P y from z_from to z_to along the segment.

    Y has shape (k, 2) holding (y, y') for k solutions; all columns share one
    rescaling so ratios between solutions are preserved.  Returns the final
    states and the accumulated log of the discarded scale.
    """
    Y = Y.copy()
    k = Y.shape[0]
    L = abs(z_to - z_from)
    if L == 0:
        return Y, 0.0
    u = (z_to - z_from) / L
    t = 0.0
    logscale = 0.0
    cs = np.empty((k, order + 1), dtype=np.complex128)
    while t < L:
        z0 = z_from + t * u
        q = taylor_shift(c, z0)
        d = q.shape[0] - 1
        rho = 1e300
        for l in range(d + 1):
            a = abs(q[l])
            if a > 0:
                r = a ** (-1.0 / (l + 2))
                if r < rho:
                    rho = r
        hl = min(L - t, step_frac * rho)
        while True:
            h = hl * u
            ok = True
            for j in range(k):
                cs[j, 0] = Y[j, 0]
                cs[j, 1] = Y[j, 1]
                for m in range(order - 1):
                    acc = 0j
                    top = m if m < d else d
                    for l in range(top + 1):
                        acc += q[l] * cs[j, m - l]
                    cs[j, m + 2] = acc / ((m + 2) * (m + 1))
            newY = np.empty((k, 2), dtype=np.complex128)
            for j in range(k):
                y = 0j
                dy = 0j
                total = 0.0
                hp = 1.0 + 0j
                for m in range(order + 1):
                    term = cs[j, m] * hp
                    y += term
                    total += abs(term)
                    if m >= 1:
                        dy += m * cs[j, m] * hp / h
                    hp *= h
                tail = abs(cs[j, order] * hp / h) + abs(cs[j, order - 1] * hp / (h * h))
                if tail > 1e-17 * total:
                    ok = False
                newY[j, 0] = y
                newY[j, 1] = dy
            if ok or hl < 1e-14 * L:
                break
            hl *= 0.5
        Y = newY
        t += hl
        big = 0.0
        for j in range(k):
            big = max(big, abs(Y[j, 0]), abs(Y[j, 1]))
        if big > 1e100 or big < 1e-100:
            for j in range(k):
                Y[j, 0] /= big
                Y[j, 1] /= big
            logscale += np.log(big)
    return Y, logscale
