"""Spectra of periodic equilateral metric graphs via their discrete Laplacians.

Typical use::

    from metricbands import builtin, analyze
    report = analyze(builtin("z_pendant"))
    report.omega.gaps
"""

from .cattaneo import energy_spectrum, omega_spectrum, phi, phi_inv, unfold_momentum
from .estimates import certify, check_prop31, preimage_measure, star_set
from .floquet import band_values, fiber_matrix, hermitian_eigenvalues
from .graph_model import (FundamentalGraph, GraphError, builtin, builtin_names, check_connected,
                          classify, compute_beta, find_precise_point, is_bipartite_fundamental,
                          is_bipartite_periodic, is_loop_graph, parse_graph, serialize_graph)
from .intervals import IntervalSet
from .oracle import compare_with_floquet, torus_eigenvalues
from .report import SpectrumReport, analyze, verify
from .spectrum import band_intervals, detect_flat_bands, gaps, sample_bands, union

__version__ = "0.1.0"

__all__ = [
    "FundamentalGraph", "GraphError", "IntervalSet", "SpectrumReport",
    "analyze", "band_intervals", "band_values", "builtin", "builtin_names", "certify",
    "check_connected", "check_prop31", "classify", "compare_with_floquet", "compute_beta",
    "detect_flat_bands", "energy_spectrum", "fiber_matrix", "find_precise_point", "gaps",
    "hermitian_eigenvalues", "is_bipartite_fundamental", "is_bipartite_periodic",
    "is_loop_graph", "omega_spectrum", "parse_graph", "phi", "phi_inv", "preimage_measure",
    "sample_bands", "serialize_graph", "star_set", "torus_eigenvalues", "unfold_momentum",
    "union", "verify",
]
