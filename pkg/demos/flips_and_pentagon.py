"""
Flips, mutations and the pentagon
=================================

Cross ratios attached to a triangulation change by a fixed rational rule
when one diagonal is flipped.  We check the rule against a direct
computation from the asymptotic values and walk once around the pentagon.
"""

import numpy as np

from stokes_cluster import F, from_coefficients
from stokes_cluster.cluster import (
    IdealTriangulation,
    chart_coords,
    exchange_graph,
    flip,
    mutate_coords,
    mutate_quiver,
    quiver_of,
)

p = from_coefficients(2, [0.3 - 0.1j, -0.7 + 0.2j])
c = F(p)
T = IdealTriangulation(5, [(0, 2), (0, 3)])
ch = chart_coords(c, T)
print("X on", T.arcs, "=", np.round(ch.X, 6))

###############################################################################
# Flip (0, 2).  Mutating the coordinates and recomputing them from the
# configuration give the same numbers.

k = (0, 2)
print("mutated:", np.round(mutate_coords(ch, k).X, 6))
print("direct: ", np.round(chart_coords(c, flip(T, k)).X, 6))

###############################################################################
# Five flips, each time of the arc that was not just created, bring us back.

cur, newest = ch, None
for step in range(5):
    k = next(a for a in cur.arcs if a != newest)
    before = set(cur.arcs)
    cur = mutate_coords(cur, k)
    newest = (set(cur.arcs) - before).pop()
    print(step + 1, cur.arcs, np.round(cur.X, 6))

###############################################################################
# The quiver of a triangulation mutates the same way.

Q = quiver_of(T)
print(Q.eps)
print(mutate_quiver(Q, 0).eps)
print(quiver_of(flip(T, (0, 2))).eps)

G = exchange_graph(6)
print("hexagon:", G.number_of_nodes(), "triangulations,", G.number_of_edges(), "flips")
