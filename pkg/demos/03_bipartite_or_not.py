"""Bipartite graphs have a spectrum symmetric about zero.

The hexagonal lattice is bipartite: its two bands [-1, 0] and [0, 1] are
mirror images and touch at the Dirac point (2pi/3, 4pi/3).  The triangular
lattice is not: its single band is [-1, 1/2], the Dirichlet point pi of the
metric graph falls inside a gap, and although every bridge joins a vertex to
its own translate, no corner of the torus makes all three bridges antiperiodic
at once.
"""

from metricbands import analyze, builtin
from metricbands.floquet import band_values

hexagonal = analyze(builtin("hexagonal"))
dirac = band_values(builtin("hexagonal"), [2.0943951023931953, 4.1887902047863905]).lambdas
print("hexagonal bands:", [(round(b.lo, 9), round(b.hi, 9)) for b in hexagonal.table.bands])
print("at the Dirac point:", dirac)
print("spectrum as a set:", hexagonal.discrete.intervals)
print("pi is", hexagonal.omega.pi_flat_band.placement)

tri = analyze(builtin("triangular"))
cls = tri.classification
print("\ntriangular band:", [(round(b.lo, 9), round(b.hi, 9)) for b in tri.table.bands])
print("loop graph:", cls.is_loop_graph, " precise point:", cls.precise_point,
      " bipartite:", cls.gamma_bipartite)
gap = tri.omega.gaps[-1]
print(f"momentum gap ({gap.lo:.9f}, {gap.hi:.9f}) holds the flat band(s) {gap.flat_points}")
print("pi is", tri.omega.pi_flat_band.placement)
