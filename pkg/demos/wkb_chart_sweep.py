"""
The chart at small hbar
=======================

Rescaling the coefficients by t = hbar^(-2/(n+3)) is the same as solving
hbar^2 y'' = P y.  For P = z^2 - 1 the single cross ratio is known in closed
form, X = exp(-i pi / hbar), which makes this a good place to watch the
numbers.
"""

import numpy as np

from stokes_cluster import chamber_search, from_coefficients, wkb_chart

p = from_coefficients(1, [-1])

for h in [1.0, 1 / 3, 0.4, 0.2, 0.1 + 0.02j]:
    X = wkb_chart(p, h).X[0]
    print(f"hbar = {h:<12} X = {X:.10f}   exact {np.exp(-1j * np.pi / h):.10f}")

###############################################################################
# At hbar = 1/E with E odd the oscillator has a bound state: the decaying
# solutions at both ends agree and the cross ratio is exactly -1.

print([complex(np.round(wkb_chart(p, 1 / E).X[0], 12)) for E in (1, 3, 5)])

###############################################################################
# The chamber search halves eps until the charts at eps, eps/2, eps/4 are all
# finite, nonzero and inside |log|X|| < 40.

res = chamber_search(p)
print("eps:", res.eps, "success:", res.success)

###############################################################################
# Off the real axis |X| = exp(-pi Im(hbar) / |hbar|^2), so the
# magnitude bound is what limits how small hbar can be taken.

for h in [0.2 + 0.05j, 0.1 + 0.05j, 0.05 + 0.05j]:
    X = wkb_chart(p, h).X[0]
    print(f"hbar = {h}: log|X| = {np.log(abs(X)):.3f}")
