"""End-to-end pipeline: graph -> bands -> momentum/energy spectra -> certification."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .cattaneo import (OmegaSpectrum, UnfoldedSpectrum, energy_spectrum, omega_spectrum,
                       unfold_momentum)
from .estimates import CertificationReport, CheckRecord, certify, prop31_random_suite
from .graph_model import Classification, FundamentalGraph, check_connected, classify
from .intervals import Gap, IntervalSet
from .oracle import MAX_TORUS_SIZE, compare_with_floquet
from .spectrum import (FLAT_TOL, BandTable, band_intervals, default_grid, detect_flat_bands,
                       union)

__all__ = ["SpectrumReport", "analyze", "verify", "ORACLE_TOL", "format_text"]

ORACLE_TOL = 1e-8


@dataclass
class SpectrumReport:
    graph: FundamentalGraph
    classification: Classification
    table: BandTable
    discrete: IntervalSet
    discrete_gaps: list[Gap]
    flats: list[tuple[float, int]]
    omega: OmegaSpectrum
    momentum: UnfoldedSpectrum
    energy: UnfoldedSpectrum
    certification: CertificationReport = field(default_factory=CertificationReport)

    @property
    def ok(self) -> bool:
        return self.certification.ok

    def to_dict(self) -> dict:
        g, cls, t = self.graph, self.classification, self.table
        return _finite({
            "graph": {
                "dim": g.dim,
                "nu": g.nu,
                "vertices": list(g.vertices),
                "degrees": list(g.degrees),
                "bridge_degrees": list(g.bridge_degrees),
                "edges": [[g.vertices[e.j], g.vertices[e.k], list(e.tau)] for e in g.edges],
            },
            "is_loop_graph": cls.is_loop_graph,
            "precise_point": list(cls.precise_point) if cls.precise_point is not None else None,
            "gamma_bipartite": cls.gamma_bipartite,
            "gamma_f_bipartite": cls.gamma_f_bipartite,
            "beta": _fraction(cls.beta),
            "beta_value": float(cls.beta),
            "grid": t.grid_resolution,
            "flat_tol": t.flat_tol,
            "discrete": {
                "bands": [{
                    "index": b.index, "lo": b.lo, "hi": b.hi, "flat": b.is_flat,
                    "arg_lo": list(b.arg_lo), "arg_hi": list(b.arg_hi),
                    "lo_source": b.lo_source, "hi_source": b.hi_source,
                } for b in t.bands],
                "spectrum": [list(iv) for iv in self.discrete.intervals],
                "flat_bands": [{"value": mu, "band": n} for mu, n in self.flats],
                "gaps": [_gap(gp) for gp in self.discrete_gaps],
                "measure": self.discrete.measure(),
                "band_length_sum": t.total_length(),
            },
            "omega": {
                "bands": [{"index": i + 1, "lo": a, "hi": b, "flat": t.bands[i].is_flat}
                          for i, (a, b) in enumerate(self.omega.bands)],
                "spectrum": [list(iv) for iv in self.omega.ac_set.intervals],
                "flat_bands": [_flat(f) for f in self.omega.flat_bands],
                "gaps": [_gap(gp) for gp in self.omega.gaps],
                "measure": self.omega.measure(),
            },
            "pi_flat_band": self.omega.pi_flat_band.placement,
            "momentum": _unfolded(self.momentum),
            "energy": _unfolded(self.energy),
            "certification": {
                "ok": self.certification.ok,
                "seed": self.certification.seed,
                "checks": [r.as_dict() for r in self.certification.records],
            },
        })


def _fraction(f) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _gap(gp: Gap) -> dict:
    return {"lo": gp.lo, "hi": gp.hi, "length": gp.length, "flat_bands": list(gp.flat_points)}


def _flat(f) -> dict:
    return {"value": f.value, "kind": f.kind, "placement": f.placement, "note": f.note}


def _unfolded(u: UnfoldedSpectrum) -> dict:
    return {
        "cutoff": u.cutoff,
        "spectrum": [{"lo": a, "hi": b, "truncated": tr}
                     for (a, b), tr in zip(u.ac_set.intervals, u.truncated)],
        "flat_bands": [_flat(f) for f in u.flat_bands],
        "gaps": [_gap(gp) for gp in u.gaps()],
    }


def _finite(obj):
    """Replace non-finite floats by None so the JSON stays standard."""
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def analyze(g: FundamentalGraph, grid: Optional[int] = None, flat_tol: float = FLAT_TOL,
            z_max: float = 4 * math.pi, e_max: Optional[float] = None,
            seed: Optional[int] = None) -> SpectrumReport:
    """Run the full pipeline on one graph.  Raises GraphError for disconnected input."""
    check_connected(g)
    cls = classify(g)
    table = band_intervals(g, grid or default_grid(g.dim), flat_tol=flat_tol)
    flats = detect_flat_bands(table)
    discrete = union(table)
    omega = omega_spectrum(table, flats, dim=g.dim)
    momentum = unfold_momentum(omega, z_max)
    energy = energy_spectrum(momentum, e_max if e_max is not None else z_max ** 2)
    cert = certify(g, table, omega, cls)
    cert.seed = seed
    return SpectrumReport(graph=g, classification=cls, table=table, discrete=discrete,
                          discrete_gaps=discrete.gaps((-1.0, 1.0)), flats=flats, omega=omega,
                          momentum=momentum, energy=energy, certification=cert)


def verify(g: FundamentalGraph, oracle_n: int = 8, grid: Optional[int] = None,
           seed: int = 0, flat_tol: float = FLAT_TOL) -> list[CheckRecord]:
    """Oracle comparison, every certification check and the random preimage suite."""
    rows = []
    n = oracle_n
    while n > 3 and g.nu * n ** g.dim > MAX_TORUS_SIZE:
        n -= 1
    if g.nu * n ** g.dim > MAX_TORUS_SIZE:
        rows.append(CheckRecord("oracle", "skipped",
                                detail="skipped (precondition): torus above the size cap"))
    else:
        dev = compare_with_floquet(g, n)
        note = f"N={n}" + (f" (reduced from {oracle_n} by the size cap)" if n != oracle_n else "")
        rows.append(CheckRecord("oracle", "pass" if dev <= ORACLE_TOL else "fail", lhs=dev,
                                rhs=0.0, tolerance=ORACLE_TOL,
                                statement="Floquet samples match the finite torus spectrum",
                                detail=note))
    rep = analyze(g, grid=grid, flat_tol=flat_tol, seed=seed)
    rows.extend(rep.certification.records)
    rows.append(prop31_random_suite(seed))
    return rows


def format_text(d: dict) -> str:
    """Human-readable rendering of a report dictionary (9 decimal places)."""
    f = lambda x: "null" if x is None else f"{x:.9f}"  # noqa: E731
    lines = []
    g = d["graph"]
    lines.append(f"graph: dim={g['dim']} nu={g['nu']} degrees={g['degrees']} "
                 f"bridge_degrees={g['bridge_degrees']}")
    pp = d["precise_point"]
    lines.append(f"loop graph: {d['is_loop_graph']}   precise point: "
                 f"{'none in {0,pi}^d' if pp is None else '(' + ', '.join(f(x) for x in pp) + ')'}")
    lines.append(f"bipartite: {d['gamma_bipartite']}   fundamental graph bipartite: "
                 f"{d['gamma_f_bipartite']}")
    lines.append(f"beta = {d['beta']} = {f(d['beta_value'])}   grid = {d['grid']}")
    lines.append("")
    lines.append("discrete Laplacian bands:")
    for b in d["discrete"]["bands"]:
        flag = "  flat" if b["flat"] else ""
        lines.append(f"  {b['index']:>3}  [{f(b['lo'])}, {f(b['hi'])}]{flag}")
    lines.append("  spectrum: " + " U ".join(f"[{f(a)}, {f(b)}]" for a, b in d["discrete"]["spectrum"]))
    lines.append(f"  measure: {f(d['discrete']['measure'])}")
    for gp in d["discrete"]["gaps"]:
        lines.append(f"  gap ({f(gp['lo'])}, {f(gp['hi'])})")
    lines.append("")
    lines.append("momentum operator on [0, pi]:")
    for b in d["omega"]["bands"]:
        flag = "  flat" if b["flat"] else ""
        lines.append(f"  {b['index']:>3}  [{f(b['lo'])}, {f(b['hi'])}]{flag}")
    lines.append(f"  measure: {f(d['omega']['measure'])}")
    for gp in d["omega"]["gaps"]:
        lines.append(f"  gap ({f(gp['lo'])}, {f(gp['hi'])})")
    for fb in d["omega"]["flat_bands"]:
        note = f"  [{fb['note']}]" if fb["note"] else ""
        lines.append(f"  flat band {f(fb['value'])} ({fb['kind']}, {fb['placement']}){note}")
    lines.append("")
    for key, label in (("momentum", "sqrt of metric Laplacian"), ("energy", "metric Laplacian")):
        u = d[key]
        lines.append(f"{label} up to {f(u['cutoff'])}:")
        for iv in u["spectrum"]:
            tr = "  (truncated)" if iv["truncated"] else ""
            lines.append(f"  [{f(iv['lo'])}, {f(iv['hi'])}]{tr}")
    lines.append("")
    lines.append("certification:")
    for r in d["certification"]["checks"]:
        lines.append(f"  {r['status']:<8} {r['name']:<26} {r['detail']}".rstrip())
    lines.append(f"overall: {'PASS' if d['certification']['ok'] else 'FAIL'}")
    return "\n".join(lines)
