"""Certification of the band-length, measure, gap and loop/bipartite relations.

Every check yields a :class:`CheckRecord`.  Checks whose hypothesis does
not hold on the given graph are recorded as ``skipped`` with the failed
precondition named, never silently dropped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .cattaneo import OmegaSpectrum, UnfoldedSpectrum, energy_spectrum, unfold_momentum
from .floquet import band_values_batch, ground_state_residual
from .graph_model import Classification, FundamentalGraph
from .intervals import IntervalSet
from .spectrum import BandTable, FlatBandError, detect_flat_bands, union

__all__ = [
    "IDENTITY_TOL",
    "INEQUALITY_TOL",
    "CHAIN_TOL",
    "SHORTCUT_TOL",
    "SYMMETRY_TOL",
    "CheckRecord",
    "CertificationReport",
    "star_set",
    "preimage_measure",
    "check_prop31",
    "prop31_random_suite",
    "check_band_estimate",
    "check_band_sum_bound",
    "check_total_estimate",
    "check_gap_sum",
    "check_infinite_gaps",
    "check_loop_identities",
    "check_bipartite_properties",
    "check_structure",
    "check_unfolded_gaps",
    "certify",
]

IDENTITY_TOL = 1e-9
INEQUALITY_TOL = 1e-9
CHAIN_TOL = 1e-12
SHORTCUT_TOL = 1e-6
SYMMETRY_TOL = 1e-6
SQRT_BOUND = math.pi / math.sqrt(2.0)


@dataclass(frozen=True)
class CheckRecord:
    name: str
    status: str  # "pass", "fail" or "skipped"
    lhs: object = None
    rhs: object = None
    tolerance: Optional[float] = None
    statement: str = ""
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    @property
    def failed(self) -> bool:
        return self.status == "fail"

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "lhs": _jsonable(self.lhs),
            "rhs": _jsonable(self.rhs),
            "tolerance": self.tolerance,
            "statement": self.statement,
            "detail": self.detail,
        }


def _jsonable(v):
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, (np.bool_,)):
        return bool(v)
    return v


@dataclass
class CertificationReport:
    records: list[CheckRecord] = field(default_factory=list)
    seed: Optional[int] = None

    def add(self, rec: CheckRecord) -> None:
        if any(r.name == rec.name for r in self.records):
            raise ValueError(f"duplicate check {rec.name!r}")
        self.records.append(rec)

    def extend(self, recs) -> None:
        for r in recs:
            self.add(r)

    def __getitem__(self, name: str) -> CheckRecord:
        for r in self.records:
            if r.name == name:
                return r
        raise KeyError(name)

    @property
    def ok(self) -> bool:
        return not any(r.failed for r in self.records)

    def failures(self) -> list[CheckRecord]:
        return [r for r in self.records if r.failed]


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def _skip(name, statement, precondition) -> CheckRecord:
    return CheckRecord(name, "skipped", statement=statement,
                       detail=f"skipped (precondition): {precondition}")


def _chain_ok(values: Sequence[float], tol: float) -> bool:
    return all(values[i] <= values[i + 1] + tol for i in range(len(values) - 1))


# --------------------------------------------------------------------------
# preimage machinery for phi(z) = -cos z
# --------------------------------------------------------------------------

def star_set(m: float) -> tuple[float, float]:
    """Symmetric set [-1, -l] U [l, 1] of measure m: returns (l, z) with l = cos z.

    The preimage of that set under -cos has measure 2 z.
    """
    if m < -CHAIN_TOL or m > 2 + CHAIN_TOL:
        raise ValueError("measure must lie in [0, 2]")
    lam = 1.0 - min(max(m, 0.0), 2.0) / 2.0
    return lam, math.acos(lam)


def preimage_measure(s: IntervalSet) -> float:
    """Measure of the preimage of s under -cos on [0, pi]."""
    total = 0.0
    for a, b in s.intervals:
        if a < -1 - CHAIN_TOL or b > 1 + CHAIN_TOL:
            raise ValueError("set must lie in [-1, 1]")
        a, b = max(a, -1.0), min(b, 1.0)
        total += math.acos(-b) - math.acos(-a)
    return total


def check_prop31(s: IntervalSet, name: str = "preimage_chain") -> CheckRecord:
    m = s.measure()
    pre = preimage_measure(s)
    _, z_star = star_set(m)
    values = [m, pre, 2 * z_star, SQRT_BOUND * math.sqrt(m)]
    return CheckRecord(
        name, _status(_chain_ok(values, CHAIN_TOL)), lhs=values[:-1], rhs=values[1:],
        tolerance=CHAIN_TOL,
        statement="|S| <= |phi^-1(S)| <= |phi^-1(S_*)| <= (pi/sqrt2)|S|^1/2",
    )


def _random_union(rng: np.random.Generator, k: int) -> IntervalSet:
    cuts = np.sort(rng.uniform(-1.0, 1.0, size=2 * k))
    return IntervalSet.from_intervals([(cuts[2 * i], cuts[2 * i + 1]) for i in range(k)])


def prop31_random_suite(seed: int = 0, n_single: int = 1000, n_union: int = 1000) -> CheckRecord:
    """Run the preimage chain on seeded random single intervals and unions of <= 4."""
    rng = np.random.default_rng(seed)
    worst = -math.inf
    failures = 0
    for i in range(n_single + n_union):
        k = 1 if i < n_single else int(rng.integers(1, 5))
        rec = check_prop31(_random_union(rng, k))
        vals = rec.lhs + [rec.rhs[-1]]
        worst = max(worst, max(vals[j] - vals[j + 1] for j in range(3)))
        failures += rec.failed
    full = check_prop31(IntervalSet(((-1.0, 1.0),)))
    attained = abs(full.lhs[1] - full.rhs[-1]) <= CHAIN_TOL
    ok = failures == 0 and attained
    return CheckRecord(
        "preimage_chain_random", _status(ok), lhs=worst, rhs=0.0, tolerance=CHAIN_TOL,
        statement="preimage chain on random interval unions; upper bound attained on [-1, 1]",
        detail=f"seed={seed}, singles={n_single}, unions={n_union}, failures={failures}, "
               f"upper bound attained on [-1,1]: {attained}",
    )


# --------------------------------------------------------------------------
# measure estimates
# --------------------------------------------------------------------------

def check_band_estimate(t: BandTable, o: OmegaSpectrum) -> CheckRecord:
    d_len = [b.length for b in t.bands]
    o_len = o.band_lengths()
    bound = [SQRT_BOUND * math.sqrt(max(x, 0.0)) for x in d_len]
    ok = all(a <= b + INEQUALITY_TOL and b <= c + INEQUALITY_TOL
             for a, b, c in zip(d_len, o_len, bound))
    return CheckRecord("band_estimate", _status(ok), lhs=[d_len, o_len], rhs=[o_len, bound],
                       tolerance=INEQUALITY_TOL,
                       statement="|sigma_n(Delta)| <= |sigma_n(Omega)| <= (pi/sqrt2)|sigma_n(Delta)|^1/2")


def check_band_sum_bound(t: BandTable, beta: float, merge_tol: float = 1e-9) -> CheckRecord:
    m = union(t, merge_tol=merge_tol).measure()
    total = t.total_length()
    values = [m, total, 2 * beta]
    return CheckRecord("band_sum_bound", _status(_chain_ok(values, INEQUALITY_TOL)),
                       lhs=values[:-1], rhs=values[1:], tolerance=INEQUALITY_TOL,
                       statement="|sigma(Delta)| <= sum_n |sigma_n(Delta)| <= 2 beta")


def check_total_estimate(t: BandTable, o: OmegaSpectrum, beta: float) -> CheckRecord:
    m = union(t).measure()
    values = [m, o.measure(), SQRT_BOUND * math.sqrt(m), math.pi * math.sqrt(beta)]
    return CheckRecord("total_measure_chain", _status(_chain_ok(values, INEQUALITY_TOL)),
                       lhs=values[:-1], rhs=values[1:], tolerance=INEQUALITY_TOL,
                       statement="|sigma(Delta)| <= |sigma(Omega)| <= (pi/sqrt2)|sigma(Delta)|^1/2 <= pi sqrt(beta)")


def check_gap_sum(o: OmegaSpectrum, beta: float) -> CheckRecord:
    total = sum(gp.length for gp in o.gaps)
    identity = math.pi - o.measure()
    bound = math.pi * (1 - math.sqrt(beta))
    statement = "sum |gamma_n(Omega)| = pi - |sigma(Omega)| >= pi (1 - sqrt(beta))"
    identity_ok = abs(total - identity) <= IDENTITY_TOL
    if beta >= 1 and not o.gaps:
        return CheckRecord("gap_sum", _status(identity_ok), lhs=[total], rhs=[identity],
                           tolerance=IDENTITY_TOL, statement=statement,
                           detail="no gaps and beta >= 1: lower bound not applicable, identity only")
    ok = identity_ok and total >= bound - INEQUALITY_TOL
    return CheckRecord("gap_sum", _status(ok), lhs=[total, total], rhs=[identity, bound],
                       tolerance=INEQUALITY_TOL, statement=statement)


def check_infinite_gaps(t: BandTable, o: OmegaSpectrum, beta: float) -> CheckRecord:
    statement = "beta < 1 implies |sigma(Delta)| < 2 and infinitely many gaps of the metric Laplacian"
    if beta >= 1:
        return _skip("infinite_gaps", statement, f"beta < 1 fails (beta = {beta:.12g})")
    m = union(t).measure()
    ok = m < 2 - INEQUALITY_TOL and len(o.gaps) >= 1
    return CheckRecord("infinite_gaps", _status(ok), lhs=[m, len(o.gaps)], rhs=[2.0, 1],
                       tolerance=INEQUALITY_TOL, statement=statement,
                       detail=f"{len(o.gaps)} gap(s) of Omega, repeated with period 2 pi")


# --------------------------------------------------------------------------
# loop graphs
# --------------------------------------------------------------------------

def check_loop_identities(g: FundamentalGraph, t: BandTable, o: OmegaSpectrum,
                          cls: Classification) -> list[CheckRecord]:
    out = []
    beta = float(cls.beta)
    lam0 = band_values_batch(g, np.zeros(g.dim))
    numeric = [(b.index, abs(b.numeric_lo - lam0[b.index - 1])) for b in t.bands]

    st = "lower band edges attained at theta = 0; numeric extrema agree with the exact edges"
    if not cls.is_loop_graph:
        out.append(_skip("shortcut_agreement", st, "not a loop graph"))
        out.append(_skip("loop_lower_edges", "-cos z_n^- = lambda_n(0)", "not a loop graph"))
    else:
        devs = [dev for _, _, dev in t.shortcut_deviations()]
        worst = max(devs) if devs else 0.0
        out.append(CheckRecord("shortcut_agreement", _status(worst <= SHORTCUT_TOL), lhs=worst,
                               rhs=0.0, tolerance=SHORTCUT_TOL, statement=st,
                               detail=f"max numeric-vs-exact lower edge deviation "
                                      f"{max(d for _, d in numeric):.3e}"))
        lhs = [-math.cos(z_lo) for z_lo, _ in o.bands]
        ok = np.allclose(lhs, lam0, rtol=0, atol=IDENTITY_TOL)
        out.append(CheckRecord("loop_lower_edges", _status(bool(ok)), lhs=lhs, rhs=list(lam0),
                               tolerance=IDENTITY_TOL, statement="-cos z_n^- = lambda_n(0)"))

    names = ("precise_upper_edges", "precise_band_sum", "precise_omega_band_sum")
    statements = ("-cos z_n^+ = lambda_n(theta_0)",
                  "sum_n |sigma_n(Delta)| = 2 beta",
                  "2 beta <= sum_n |sigma_n(Omega)|")
    if cls.precise_point is None:
        reason = "not a loop graph" if not cls.is_loop_graph else "no precise point in {0, pi}^d"
        out.extend(_skip(n, s, reason) for n, s in zip(names, statements))
        return out
    lam_p = band_values_batch(g, np.array(cls.precise_point))
    lhs = [-math.cos(z_hi) for _, z_hi in o.bands]
    out.append(CheckRecord(names[0], _status(bool(np.allclose(lhs, lam_p, rtol=0, atol=IDENTITY_TOL))),
                           lhs=lhs, rhs=list(lam_p), tolerance=IDENTITY_TOL, statement=statements[0]))
    total = t.total_length()
    out.append(CheckRecord(names[1], _status(abs(total - 2 * beta) <= IDENTITY_TOL), lhs=total,
                           rhs=2 * beta, tolerance=IDENTITY_TOL, statement=statements[1]))
    o_total = float(sum(o.band_lengths()))
    out.append(CheckRecord(names[2], _status(2 * beta <= o_total + INEQUALITY_TOL), lhs=2 * beta,
                           rhs=o_total, tolerance=INEQUALITY_TOL, statement=statements[2]))
    return out


# --------------------------------------------------------------------------
# bipartite graphs
# --------------------------------------------------------------------------

def _omega_interior(o: OmegaSpectrum) -> IntervalSet:
    discrete = [f.value for f in o.flat_bands if f.kind == "discrete"]
    return IntervalSet.from_intervals(o.ac_set.intervals, discrete).clip(0.0, math.pi)


def check_bipartite_properties(g: FundamentalGraph, t: BandTable, o: OmegaSpectrum,
                               cls: Classification) -> list[CheckRecord]:
    out = []
    bip = cls.gamma_bipartite

    disc = union(t)
    h_disc = disc.hausdorff(disc.reflect(0.0))
    sym = h_disc <= SYMMETRY_TOL
    out.append(CheckRecord("discrete_symmetry", _status(sym == bip), lhs=h_disc, rhs=SYMMETRY_TOL,
                           tolerance=SYMMETRY_TOL,
                           statement="sigma(Delta) symmetric about 0 iff the graph is bipartite",
                           detail=f"bipartite={bip}, Hausdorff distance to reflection {h_disc:.3e}"))

    inner = _omega_interior(o)
    h = inner.hausdorff(inner.reflect(math.pi))
    sym = h <= SYMMETRY_TOL
    out.append(CheckRecord("omega_symmetry", _status(sym == bip), lhs=h, rhs=SYMMETRY_TOL,
                           tolerance=SYMMETRY_TOL,
                           statement="sigma(Omega) on (0, pi) symmetric about pi/2 iff bipartite",
                           detail=f"bipartite={bip}, Hausdorff distance to reflection {h:.3e}"))

    pi_band = o.pi_flat_band
    top = o.ac_set.upper
    if bip:
        ok = pi_band.placement == "embedded"
    else:
        ok = pi_band.placement == "in_gap" and top < math.pi - INEQUALITY_TOL
    out.append(CheckRecord("dirichlet_pi_placement", _status(ok), lhs=top, rhs=math.pi,
                           tolerance=INEQUALITY_TOL,
                           statement="pi lies in the closure of sigma_ac(Omega) iff bipartite, "
                                     "otherwise strictly inside a gap",
                           detail=f"bipartite={bip}, pi flat band {pi_band.placement}"))

    st = "bipartite fundamental graph with an odd number of vertices has flat band 0 (z = pi/2)"
    if not cls.gamma_f_bipartite:
        out.append(_skip("odd_cell_flat_band", st, "fundamental graph not bipartite"))
    elif g.nu % 2 == 0:
        out.append(_skip("odd_cell_flat_band", st, "number of vertices is even"))
    else:
        flats = detect_flat_bands(t)
        mu = min((abs(m) for m, _ in flats), default=math.inf)
        zs = [f.value for f in o.flat_bands if f.kind == "discrete"]
        dz = min((abs(z - math.pi / 2) for z in zs), default=math.inf)
        ok = mu <= t.flat_tol and dz <= t.flat_tol
        out.append(CheckRecord("odd_cell_flat_band", _status(ok), lhs=[mu, dz], rhs=[0.0, 0.0],
                               tolerance=t.flat_tol, statement=st))

    st = "loop bipartite graph: -cos z_n^- = lambda_n(0), cos z_n^+ = lambda_{nu-n+1}(0)"
    if not cls.is_loop_graph:
        out.append(_skip("loop_bipartite_edges", st, "not a loop graph"))
    elif not bip:
        out.append(_skip("loop_bipartite_edges", st, "graph not bipartite"))
    else:
        lam0 = band_values_batch(g, np.zeros(g.dim))
        lhs = [-math.cos(a) for a, _ in o.bands] + [math.cos(b) for _, b in o.bands]
        rhs = list(lam0) + list(lam0[::-1])
        ok = bool(np.allclose(lhs, rhs, rtol=0, atol=IDENTITY_TOL))
        out.append(CheckRecord("loop_bipartite_edges", _status(ok), lhs=lhs, rhs=rhs,
                               tolerance=IDENTITY_TOL, statement=st))
    return out


# --------------------------------------------------------------------------
# structural consistency of the correspondence
# --------------------------------------------------------------------------

def check_structure(g: FundamentalGraph, t: BandTable, o: OmegaSpectrum) -> list[CheckRecord]:
    out = []
    disc = union(t)
    d_gaps = disc.gaps((-1.0, 1.0))
    out.append(CheckRecord("gap_count", _status(len(d_gaps) == len(o.gaps)), lhs=len(d_gaps),
                           rhs=len(o.gaps), tolerance=0.0,
                           statement="Omega and Delta have the same number of gaps"))

    z1 = o.bands[0][0]
    ok = abs(z1) <= IDENTITY_TOL and o.ac_set.ac_contains(0.0)
    out.append(CheckRecord("first_band_at_zero", _status(ok), lhs=z1, rhs=0.0,
                           tolerance=IDENTITY_TOL,
                           statement="first band of Omega is [0, z_1^+]"))

    lam1 = float(band_values_batch(g, np.zeros(g.dim))[0])
    res = ground_state_residual(g)
    ok = abs(lam1 + 1) <= 1e-12 and res <= 1e-12
    out.append(CheckRecord("ground_state", _status(ok), lhs=[lam1, res], rhs=[-1.0, 0.0],
                           tolerance=1e-12,
                           statement="lambda_1(0) = -1 with eigenvector (sqrt deg_n)"))

    try:
        flats = detect_flat_bands(t)
        worst = max((abs(m) for m, _ in flats), default=0.0)
        out.append(CheckRecord("flat_band_range", "pass", lhs=worst, rhs=1 - t.flat_tol,
                               tolerance=t.flat_tol, statement="flat bands never at +-1"))
    except FlatBandError as exc:
        out.append(CheckRecord("flat_band_range", "fail", tolerance=t.flat_tol,
                               statement="flat bands never at +-1", detail=str(exc)))

    full_d = abs(disc.measure() - 2) <= IDENTITY_TOL
    full_o = abs(o.measure() - math.pi) <= IDENTITY_TOL
    out.append(CheckRecord("full_spectrum_equivalence", _status(full_d == full_o),
                           lhs=disc.measure(), rhs=o.measure(), tolerance=IDENTITY_TOL,
                           statement="sigma(Omega) = [0, pi] iff sigma(Delta) = [-1, 1]"))
    return out


def _fold(z: float) -> float:
    z = math.fmod(z, 2 * math.pi)
    return 2 * math.pi - z if z > math.pi else z


def check_unfolded_gaps(o: OmegaSpectrum, z_max: float = 6 * math.pi) -> CheckRecord:
    """Copies of each gap grow along the periods in the energy domain.

    Each gap of the momentum spectrum folds back onto one gap of Omega; the
    energy lengths of the copies of that gap must increase strictly.  The
    Dirichlet points 2 pi n must sit inside the spectrum.
    """
    st = "energy length of each gap's periodic copies strictly increases; 2 pi n embedded"
    u = unfold_momentum(o, z_max)
    even = [f for f in u.flat_bands if f.kind == "dirichlet" and round(f.value / math.pi) % 2 == 0]
    embedded = all(f.placement == "embedded" for f in even)
    if not o.gaps:
        return CheckRecord("unfolded_gap_growth", _status(embedded), lhs=0, rhs=0,
                           statement=st, detail="Omega has no gaps; only embedding checked")
    families: dict[tuple[float, float], list[float]] = {}
    for gp in u.interior_gaps():
        a, b = sorted((_fold(gp.lo), _fold(gp.hi)))
        key = (round(a, 6), round(b, 6)) if b - a > 1e-9 else (round(a, 6), round(a, 6))
        families.setdefault(key, []).append(gp.hi ** 2 - gp.lo ** 2)
    ok = embedded and all(all(ls[i] < ls[i + 1] for i in range(len(ls) - 1))
                          for ls in families.values())
    return CheckRecord("unfolded_gap_growth", _status(ok),
                       lhs=[ls for _, ls in sorted(families.items())], rhs=None, statement=st,
                       detail=f"{len(families)} gap families below ({z_max:.6g})^2")


def certify(g: FundamentalGraph, t: BandTable, o: OmegaSpectrum,
            cls: Classification) -> CertificationReport:
    """All checks, in a fixed order."""
    beta = float(cls.beta)
    rep = CertificationReport()
    rep.add(check_band_estimate(t, o))
    rep.add(check_band_sum_bound(t, beta))
    rep.add(check_total_estimate(t, o, beta))
    rep.add(check_gap_sum(o, beta))
    rep.add(check_infinite_gaps(t, o, beta))
    rep.add(check_prop31(union(t)))
    rep.extend(check_loop_identities(g, t, o, cls))
    rep.extend(check_bipartite_properties(g, t, o, cls))
    rep.extend(check_structure(g, t, o))
    rep.add(check_unfolded_gaps(o))
    return rep
