"""Flat bands: eigenvalues of infinite multiplicity.

Hang two pendants on every vertex of a line and the vector (0, 1, -1) on the
two pendants is annihilated by the Laplacian for every quasimomentum: the
middle band function is the constant 0.

A second mechanism is parity.  When the fundamental graph is bipartite and
has an odd number of vertices, the fiber matrix is an odd-sized matrix with
a symmetric spectrum, so 0 is an eigenvalue at every theta.  The C4-with-
pendant chain is such a graph.  Both flat bands land at z = pi/2 on the
metric side.
"""

import math

from metricbands import analyze, builtin

for name in ("z_two_pendants", "c4_pendant_chain"):
    rep = analyze(builtin(name))
    cls = rep.classification
    print(f"{name}: {rep.graph.nu} vertices, fundamental graph bipartite: {cls.gamma_f_bipartite}")
    for mu, n in rep.flats:
        print(f"  discrete flat band {n} at mu = {mu:+.2e}")
    for f in rep.omega.flat_bands:
        label = "Dirichlet" if f.kind == "dirichlet" else "from a discrete flat band"
        print(f"  momentum flat band z = {f.value:.9f} ({label}, {f.placement})")
    print(f"  pi/2 = {math.pi / 2:.9f}")
    print()
