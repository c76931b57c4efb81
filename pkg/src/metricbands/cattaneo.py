"""Transfer of the discrete spectrum to the equilateral metric graph.

A point z >= 0 is in the momentum spectrum (square root of the metric
Laplacian) when -cos z lies in the discrete spectrum, plus the Dirichlet
points pi * n.  On [0, pi] this is a monotone bijection, so bands, gaps and
flat bands correspond one to one; beyond pi the set is reflected about pi
and repeated with period 2 pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .intervals import Gap, IntervalSet
from .spectrum import BandTable, MERGE_TOL, detect_flat_bands, union

__all__ = [
    "ENDPOINT_CLAMP",
    "PLACEMENT_TOL",
    "FlatPoint",
    "OmegaSpectrum",
    "UnfoldedSpectrum",
    "phi",
    "phi_inv",
    "omega_spectrum",
    "unfold_momentum",
    "energy_spectrum",
]

ENDPOINT_CLAMP = 1e-10
PLACEMENT_TOL = 1e-9
# arccos has infinite slope at +-1: eigenvalue noise of 1e-16 there would
# move z by 1e-8, so discrete edges this close to +-1 are snapped first.
EDGE_SNAP = 1e-12


def phi(z: float, tol: float = 1e-12) -> float:
    """-cos z on [0, pi]."""
    if z < -tol or z > math.pi + tol:
        raise ValueError(f"phi is defined on [0, pi], got {z!r}")
    return -math.cos(min(max(z, 0.0), math.pi))


def phi_inv(lam: float, tol: float = 1e-12) -> float:
    """arccos(-lam), mapping [-1, 1] onto [0, pi]."""
    if lam < -1 - tol or lam > 1 + tol:
        raise ValueError(f"phi_inv is defined on [-1, 1], got {lam!r}")
    return math.acos(-min(max(lam, -1.0), 1.0))


@dataclass(frozen=True)
class FlatPoint:
    value: float
    kind: str  # "discrete" or "dirichlet"
    placement: str  # "embedded" or "in_gap"
    note: str = ""


@dataclass(frozen=True)
class OmegaSpectrum:
    bands: tuple[tuple[float, float], ...]
    flat_bands: tuple[FlatPoint, ...]
    ac_set: IntervalSet
    gaps: tuple[Gap, ...]
    dim: int = 0

    def measure(self) -> float:
        return self.ac_set.measure()

    def as_set(self) -> IntervalSet:
        """Full spectrum: ac part plus every flat band (pi included)."""
        return IntervalSet.from_intervals(self.ac_set.intervals, [f.value for f in self.flat_bands])

    @property
    def pi_flat_band(self) -> FlatPoint:
        return next(f for f in self.flat_bands if f.kind == "dirichlet")

    def band_lengths(self) -> list[float]:
        return [b - a for a, b in self.bands]


@dataclass(frozen=True)
class UnfoldedSpectrum:
    domain: str  # "momentum" or "energy"
    ac_set: IntervalSet
    flat_bands: tuple[FlatPoint, ...]
    truncated: tuple[bool, ...]
    cutoff: float

    def gaps(self) -> list[Gap]:
        return self.ac_set.gaps((0.0, self.cutoff), [f.value for f in self.flat_bands])

    def interior_gaps(self) -> list[Gap]:
        """Gaps not cut by the cutoff."""
        return [gp for gp in self.gaps() if gp.hi < self.cutoff]


def _snap(lam: float) -> float:
    if abs(lam + 1.0) <= EDGE_SNAP:
        return -1.0
    if abs(lam - 1.0) <= EDGE_SNAP:
        return 1.0
    return lam


def _placement(ac: IntervalSet, z: float) -> str:
    return "embedded" if ac.ac_contains(z, PLACEMENT_TOL) else "in_gap"


def omega_spectrum(t: BandTable, flats: Optional[Sequence[tuple[float, int]]] = None,
                   dim: int = 0, merge_tol: float = MERGE_TOL) -> OmegaSpectrum:
    """Momentum spectrum on [0, pi] from a discrete band table."""
    if flats is None:
        flats = detect_flat_bands(t)
    inv = lambda lam: phi_inv(_snap(lam), ENDPOINT_CLAMP)  # noqa: E731
    bands = tuple((inv(b.lo), inv(b.hi)) for b in t.bands)
    discrete = union(t, merge_tol=merge_tol)
    ac = IntervalSet(discrete.intervals).map_increasing(inv)
    points = []
    for mu, _ in flats:
        z = inv(mu)
        points.append(FlatPoint(z, "discrete", _placement(ac, z)))
    note = "d=1: unverified" if dim == 1 else ""
    points.append(FlatPoint(math.pi, "dirichlet", _placement(ac, math.pi), note))
    gap_list = ac.gaps((0.0, math.pi), [p.value for p in points])
    return OmegaSpectrum(bands=bands, flat_bands=tuple(points), ac_set=ac,
                         gaps=tuple(gap_list), dim=dim)


def unfold_momentum(o: OmegaSpectrum, z_max: float) -> UnfoldedSpectrum:
    """Momentum spectrum on [0, z_max]: reflect about pi, repeat with period 2 pi."""
    if z_max <= 0:
        raise ValueError("z_max must be positive")
    two_pi = 2 * math.pi
    cell = o.ac_set.union(o.ac_set.reflect(two_pi), merge_tol=MERGE_TOL)
    periods = int(math.floor(z_max / two_pi)) + 1
    full = IntervalSet()
    for m in range(periods):
        full = full.union(cell.translate(two_pi * m), merge_tol=MERGE_TOL)
    ac = full.clip(0.0, z_max)
    truncated = tuple(b == z_max and any(a2 <= z_max < b2 for a2, b2 in full.intervals)
                      for _, b in ac.intervals)

    flats = []
    seen = set()
    for f in o.flat_bands:
        if f.kind != "discrete":
            continue
        for m in range(periods):
            for z in (f.value + two_pi * m, two_pi - f.value + two_pi * m):
                key = round(z, 9)
                if z <= z_max and key not in seen:
                    seen.add(key)
                    flats.append(FlatPoint(z, "discrete", _placement(ac, z)))
    note = "d=1: unverified" if o.dim == 1 else ""
    n = 1
    while math.pi * n <= z_max + 1e-12:
        z = math.pi * n
        flats.append(FlatPoint(z, "dirichlet", _placement(ac, z), note))
        n += 1
    flats.sort(key=lambda f: f.value)
    return UnfoldedSpectrum("momentum", ac, tuple(flats), truncated, z_max)


def energy_spectrum(u: UnfoldedSpectrum, e_max: Optional[float] = None) -> UnfoldedSpectrum:
    """Square a momentum-domain spectrum, optionally cutting at e_max."""
    if u.domain != "momentum":
        raise ValueError("energy_spectrum expects a momentum-domain spectrum")
    ac = u.ac_set.map_increasing(lambda z: z * z)
    flats = [FlatPoint(f.value ** 2, f.kind, f.placement, f.note) for f in u.flat_bands]
    truncated = list(u.truncated)
    cutoff = u.cutoff ** 2
    if e_max is not None and e_max < cutoff:
        clipped = ac.clip(0.0, e_max)
        truncated = [b == e_max and b2 > e_max
                     for (_, b), (_, b2) in zip(clipped.intervals, ac.intervals)]
        ac = clipped
        flats = [f for f in flats if f.value <= e_max]
        cutoff = e_max
    return UnfoldedSpectrum("energy", ac, tuple(flats), tuple(truncated), cutoff)
