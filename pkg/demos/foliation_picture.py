"""
Horizontal trajectories and the WKB triangulation
=================================================

The separatrices of P(z) dz^2 leave each simple zero in three directions.
When no two zeros are joined, every separatrix runs off to a Stokes
direction, and the pattern of endpoints gives a triangulation of the
polygon with n + 3 marked points.
"""

import numpy as np

from stokes_cluster import classify, from_coefficients, wkb_triangulation
from stokes_cluster.svg import structure_svg

###############################################################################
# z^2 - 1: the segment [-1, 1] is vertical, so there is no saddle.

p = from_coefficients(1, [-1])
s = classify(p)
T = wkb_triangulation(p, s)
print("saddle free:", s.saddle_free)
print("fans:", s.zero_fan)
print("triangulation:", T.arcs)

with open("square.svg", "w") as fh:
    fh.write(structure_svg(s, T))

###############################################################################
# Turning the constant to -i puts the segment on a horizontal line.  classify
# reports the saddle instead of a triangulation.

s = classify(from_coefficients(1, [-1j]))
print("saddles:", [(i, j) for i, j, _ in s.saddles])

###############################################################################
# A cubic with a tilted linear term gives a triangulated pentagon.

p = from_coefficients(2, [0, -np.exp(0.3j)])
s = classify(p)
T = wkb_triangulation(p, s)
print("pentagon:", T.arcs)
with open("pentagon.svg", "w") as fh:
    fh.write(structure_svg(s, T))
