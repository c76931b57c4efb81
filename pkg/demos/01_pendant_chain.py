"""The pendant chain: a line of vertices, each carrying one pendant edge.

This is the smallest graph where everything can be checked by hand.  The
fiber matrix is 2x2, so the two band functions have the closed form

    lambda(theta) = -cos(theta)/3 +- sqrt(cos(theta)^2/9 + 1/3)

and the spectrum is [-1, -1/3] U [1/3, 1].  We compare the library's band
table with that formula, then follow the spectrum over to the metric graph.
"""

import math

import numpy as np

from metricbands import analyze, builtin

g = builtin("z_pendant")
print("vertices:", g.vertices, "degrees:", g.degrees, "bridge degrees:", g.bridge_degrees)

rep = analyze(g)
theta = np.linspace(-np.pi, np.pi, 2001)
root = np.sqrt(np.cos(theta) ** 2 / 9 + 1 / 3)
lower, upper = -np.cos(theta) / 3 - root, -np.cos(theta) / 3 + root

for band, closed in zip(rep.table.bands, (lower, upper)):
    print(f"band {band.index}: [{band.lo:+.12f}, {band.hi:+.12f}]"
          f"   closed form [{closed.min():+.12f}, {closed.max():+.12f}]"
          f"   edges from {band.lo_source}")

# The bridge parameter: two bridge incidences on a vertex of degree 3.
print(f"\nbeta = {rep.classification.beta}; band lengths add up to "
      f"{rep.table.total_length():.12f} = 2 beta")

# On the metric graph, lambda = -cos z turns the discrete gap into a momentum gap.
gap = rep.omega.gaps[0]
print(f"momentum gap ({gap.lo:.9f}, {gap.hi:.9f}) = (arccos(1/3), arccos(-1/3)) = "
      f"({math.acos(1 / 3):.9f}, {math.acos(-1 / 3):.9f})")

chain = rep.certification["total_measure_chain"]
print("measure chain:", "  <=  ".join(f"{v:.6f}" for v in chain.lhs + [chain.rhs[-1]]))
print("the last two numbers coincide: this graph attains the bound exactly")
