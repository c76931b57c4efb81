"""Gaps of the metric Laplacian grow without bound.

The momentum spectrum on [0, pi] is reflected about pi and repeated with
period 2pi.  A momentum gap of fixed width w near z = 2 pi n becomes an
energy gap of width about 4 pi n w after squaring, so the energy gaps of the
pendant chain widen steadily with n.
"""

import math

from metricbands import analyze, builtin
from metricbands.cattaneo import energy_spectrum, unfold_momentum

rep = analyze(builtin("z_pendant"))
momentum = unfold_momentum(rep.omega, 6 * math.pi)
energy = energy_spectrum(momentum)

print("energy gap               length")
for gap in energy.interior_gaps():
    print(f"({gap.lo:10.6f}, {gap.hi:10.6f})  {gap.length:10.6f}")

print("\nDirichlet eigenvalues (pi n)^2 and where they sit:")
for f in energy.flat_bands:
    if f.kind == "dirichlet":
        print(f"  {f.value:10.6f}  {f.placement}")
