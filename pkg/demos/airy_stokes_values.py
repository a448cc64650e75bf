"""
Asymptotic values of the Airy equation
======================================

For y'' = z y there are three Stokes sectors.  In each sector one solution
decays, and the ratio y1/y2 of a fixed basis tends to a point of CP^1 along
any ray of that sector.  Here we compute the three points and compare them
with the closed form built from Ai(0) and Ai'(0).
"""

from math import gamma

import numpy as np

from stokes_cluster import asymptotic_values, asymptotic_values_direct, from_coefficients
from stokes_cluster import projective as pj

p = from_coefficients(0, [])
print(p)

###############################################################################
# Wronskians with the subdominant solutions.  The frame rows are (y, y'),
# starting from y1(0) = 1, y2'(0) = 1.

t = asymptotic_values(p)
for k, w in enumerate(t.values()):
    print(f"w_{k} = {w:.12f}")

###############################################################################
# Ai(omega^-k z) decays in sector k, so w_k = -omega^-k Ai'(0) / Ai(0).

ai0 = 3 ** (-2 / 3) / gamma(2 / 3)
aip0 = -(3 ** (-1 / 3)) / gamma(1 / 3)
omega = np.exp(2j * np.pi / 3)
ref = [-omega ** (-k) * aip0 / ai0 for k in range(3)]
print("max chordal error:", np.max(pj.chordal(t.w, pj.points(ref))))

###############################################################################
# The direct method follows y1/y2 outward along the central ray instead.

d = asymptotic_values_direct(p)
print("direct vs Wronskian:", np.max(pj.chordal(t.w, d.w)))
