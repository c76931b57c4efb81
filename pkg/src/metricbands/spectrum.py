"""Band intervals of the normalized Laplacian over the Brillouin torus.

Band functions are sampled on a uniform grid and each extremum is then
polished by derivative-free line searches, since sorted eigenvalues are
continuous but only piecewise smooth.  For loop graphs the lower band
edges sit at theta = 0, and for precise loop graphs the upper ones at the
precise point; those values replace the numeric ones, and the agreement
between both is kept for certification.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional, Sequence

import numpy as np

from .floquet import band_values_batch
from .graph_model import FundamentalGraph, find_precise_point, is_loop_graph
from .intervals import Gap, IntervalSet

__all__ = [
    "DEFAULT_GRID",
    "FLAT_TOL",
    "MERGE_TOL",
    "FlatBandError",
    "BandSamples",
    "SpectralBand",
    "BandTable",
    "default_grid",
    "sample_bands",
    "band_intervals",
    "detect_flat_bands",
    "union",
    "measure",
    "gaps",
    "IntervalSet",
    "Gap",
]

DEFAULT_GRID = {1: 256, 2: 64, 3: 24}
FLAT_TOL = 1e-8
# Bands separated by less than this are treated as touching.
MERGE_TOL = 1e-9
# The spectrum lies in [-1, 1]; band edges within this of +-1 are set to +-1.
EDGE_SNAP = 1e-12

_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0
_LINE_TOL = 1e-12
_MAX_PROBES = 200
_MIN_CYCLES = 3
_MAX_CYCLES = 12


class FlatBandError(RuntimeError):
    """A flat band was found at +-1, which cannot happen on a periodic graph."""


def default_grid(dim: int) -> int:
    return DEFAULT_GRID.get(dim, 16)


def wrap_angle(theta):
    """Map angles into [-pi, pi)."""
    return (np.asarray(theta, dtype=float) + np.pi) % (2 * np.pi) - np.pi


@dataclass(frozen=True)
class BandSamples:
    thetas: np.ndarray  # (M, d)
    values: np.ndarray  # (M, nu)
    n_per_dim: int


@dataclass(frozen=True)
class SpectralBand:
    index: int
    lo: float
    hi: float
    is_flat: bool
    arg_lo: tuple[float, ...]
    arg_hi: tuple[float, ...]
    numeric_lo: float
    numeric_hi: float
    lo_source: str = "refined"
    hi_source: str = "refined"

    @property
    def length(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)


@dataclass(frozen=True)
class BandTable:
    bands: tuple[SpectralBand, ...]
    grid_resolution: int
    refined: bool
    flat_tol: float = FLAT_TOL

    @property
    def nu(self) -> int:
        return len(self.bands)

    def lows(self) -> np.ndarray:
        return np.array([b.lo for b in self.bands])

    def highs(self) -> np.ndarray:
        return np.array([b.hi for b in self.bands])

    def total_length(self) -> float:
        return float(sum(b.length for b in self.bands))

    def shortcut_deviations(self) -> list[tuple[int, str, float]]:
        """(band, edge, |numeric - exact|) for every edge fixed by a loop shortcut."""
        out = []
        for b in self.bands:
            if b.lo_source == "shortcut":
                out.append((b.index, "lo", abs(b.numeric_lo - b.lo)))
            if b.hi_source == "shortcut":
                out.append((b.index, "hi", abs(b.numeric_hi - b.hi)))
        return out


def sample_bands(g: FundamentalGraph, n_per_dim: int) -> BandSamples:
    """Evaluate all band functions on the grid 2 pi m / N - pi plus 0 and (pi, ..., pi)."""
    if n_per_dim < 2:
        raise ValueError("n_per_dim must be >= 2")
    axis = 2 * np.pi * np.arange(n_per_dim) / n_per_dim - np.pi
    grid = np.array(list(product(axis, repeat=g.dim)), dtype=float).reshape(-1, g.dim)
    mandatory = np.array([np.zeros(g.dim), np.full(g.dim, np.pi)])
    thetas = np.vstack([mandatory, grid])
    return BandSamples(thetas=thetas, values=band_values_batch(g, thetas), n_per_dim=n_per_dim)


class _Objective:
    """sign * lambda_band(theta), evaluated for a batch of tasks at once."""

    def __init__(self, g, bands, signs):
        self.g = g
        self.rows = np.arange(len(bands))
        self.bands = np.asarray(bands)
        self.signs = np.asarray(signs, dtype=float)

    def __call__(self, x):
        vals = band_values_batch(self.g, x)
        return self.signs * vals[self.rows, self.bands]


def _line_search(obj, x, fx, direction):
    """Batched golden-section search on t in [-1, 1] along x + t * direction.

    Returns the best probe seen (including t = 0), so it never regresses.
    """
    scale = np.linalg.norm(direction, axis=1)
    tol = np.where(scale > 0, _LINE_TOL / np.maximum(scale, 1e-300), np.inf)
    a = np.full(len(x), -1.0)
    b = np.full(len(x), 1.0)
    c = b - _INVPHI * (b - a)
    e = a + _INVPHI * (b - a)
    fc = obj(x + c[:, None] * direction)
    fe = obj(x + e[:, None] * direction)
    best_t = np.zeros(len(x))
    best_f = fx.copy()
    for t_probe, f_probe in ((c, fc), (e, fe)):
        better = f_probe < best_f
        best_t = np.where(better, t_probe, best_t)
        best_f = np.where(better, f_probe, best_f)
    for _ in range(_MAX_PROBES - 2):
        if np.all(b - a <= tol):
            break
        left = fc < fe
        b = np.where(left, e, b)
        a = np.where(left, a, c)
        new_t = np.where(left, b - _INVPHI * (b - a), a + _INVPHI * (b - a))
        f_new = obj(x + new_t[:, None] * direction)
        e, fe, c, fc = (np.where(left, c, new_t), np.where(left, fc, f_new),
                        np.where(left, new_t, e), np.where(left, f_new, fe))
        better = f_new < best_f
        best_t = np.where(better, new_t, best_t)
        best_f = np.where(better, f_new, best_f)
    return x + best_t[:, None] * direction, best_f


def _refine(g, starts, bands, signs, cell):
    """Cyclic coordinate golden-section search plus one pattern step per cycle."""
    obj = _Objective(g, bands, signs)
    x = np.array(starts, dtype=float)
    fx = obj(x)
    d = g.dim
    for cycle in range(_MAX_CYCLES):
        x_start, f_start = x.copy(), fx.copy()
        for k in range(d):
            direction = np.zeros_like(x)
            direction[:, k] = cell
            x, fx = _line_search(obj, x, fx, direction)
        if d > 1:
            delta = x - x_start
            if np.any(np.linalg.norm(delta, axis=1) > 0):
                x, fx = _line_search(obj, x, fx, 2.0 * delta)
        if cycle + 1 >= _MIN_CYCLES and np.all(f_start - fx <= 1e-15):
            break
    return x, fx


def band_intervals(g: FundamentalGraph, n_per_dim: Optional[int] = None, *,
                   refine: bool = True, flat_tol: float = FLAT_TOL,
                   samples: Optional[BandSamples] = None) -> BandTable:
    """Band table [lambda_n^-, lambda_n^+] for every band index n."""
    n = n_per_dim or default_grid(g.dim)
    if samples is None:
        samples = sample_bands(g, n)
    vals, thetas = samples.values, samples.thetas
    nu = g.nu
    i_lo = np.argmin(vals, axis=0)
    i_hi = np.argmax(vals, axis=0)
    lo = vals[i_lo, np.arange(nu)]
    hi = vals[i_hi, np.arange(nu)]
    arg_lo = thetas[i_lo]
    arg_hi = thetas[i_hi]

    if refine:
        starts = np.vstack([arg_lo, arg_hi])
        bands = np.concatenate([np.arange(nu), np.arange(nu)])
        signs = np.concatenate([np.ones(nu), -np.ones(nu)])
        x, fx = _refine(g, starts, bands, signs, 2 * np.pi / n)
        better_lo = fx[:nu] < lo
        better_hi = -fx[nu:] > hi
        lo = np.where(better_lo, fx[:nu], lo)
        hi = np.where(better_hi, -fx[nu:], hi)
        arg_lo = np.where(better_lo[:, None], x[:nu], arg_lo)
        arg_hi = np.where(better_hi[:, None], x[nu:], arg_hi)

    numeric_lo, numeric_hi = lo.copy(), hi.copy()
    lo_src = ["refined" if refine else "grid"] * nu
    hi_src = list(lo_src)
    if is_loop_graph(g):
        zero = np.zeros(g.dim)
        lo = band_values_batch(g, zero)
        arg_lo = np.tile(zero, (nu, 1))
        lo_src = ["shortcut"] * nu
        point = find_precise_point(g)
        if point is not None:
            p = np.array(point)
            hi = band_values_batch(g, p)
            arg_hi = np.tile(p, (nu, 1))
            hi_src = ["shortcut"] * nu

    lo = np.where(np.abs(lo + 1.0) <= EDGE_SNAP, -1.0, lo)
    hi = np.where(np.abs(hi - 1.0) <= EDGE_SNAP, 1.0, hi)
    lo = np.where(np.abs(lo - 1.0) <= EDGE_SNAP, 1.0, lo)
    hi = np.where(np.abs(hi + 1.0) <= EDGE_SNAP, -1.0, hi)
    table = []
    for i in range(nu):
        table.append(SpectralBand(
            index=i + 1,
            lo=float(lo[i]),
            hi=float(hi[i]),
            is_flat=bool(hi[i] - lo[i] <= flat_tol),
            arg_lo=tuple(float(t) for t in wrap_angle(arg_lo[i])),
            arg_hi=tuple(float(t) for t in wrap_angle(arg_hi[i])),
            numeric_lo=float(numeric_lo[i]),
            numeric_hi=float(numeric_hi[i]),
            lo_source=lo_src[i],
            hi_source=hi_src[i],
        ))
    return BandTable(bands=tuple(table), grid_resolution=n, refined=refine, flat_tol=flat_tol)


def detect_flat_bands(t: BandTable, tol: Optional[float] = None) -> list[tuple[float, int]]:
    """Flat bands as (value, band index); a band is flat when its width is <= tol."""
    tol = t.flat_tol if tol is None else tol
    flats = []
    for b in t.bands:
        if b.hi - b.lo <= tol:
            mu = b.midpoint
            if abs(mu) >= 1 - tol:
                raise FlatBandError(f"flat band at {mu:+.12g} detected (band {b.index})")
            flats.append((mu, b.index))
    return flats


def union(t: BandTable, merge_tol: float = MERGE_TOL,
          flat_tol: Optional[float] = None) -> IntervalSet:
    """Spectrum as a set: merged non-flat bands plus isolated flat points."""
    flat_tol = t.flat_tol if flat_tol is None else flat_tol
    proper = [(b.lo, b.hi) for b in t.bands if b.hi - b.lo > flat_tol]
    points = [b.midpoint for b in t.bands if b.hi - b.lo <= flat_tol]
    return IntervalSet.from_intervals(proper, points, merge_tol=merge_tol)


def measure(s: IntervalSet) -> float:
    return s.measure()


def gaps(s: IntervalSet, hull: Sequence[float] = (-1.0, 1.0)) -> list[Gap]:
    return s.gaps(hull)
