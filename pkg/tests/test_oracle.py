import time

import numpy as np
import pytest

from metricbands.graph_model import builtin, is_bipartite_periodic
from metricbands.oracle import (MAX_TORUS_SIZE, compare_with_floquet, torus_eigenvalues,
                                torus_graph)

from conftest import BUILTINS


def _fits(g, n):
    return g.nu * n ** g.dim <= MAX_TORUS_SIZE


def test_lattice_n4():
    assert torus_eigenvalues(builtin("z1_lattice"), 4) == pytest.approx([-1, 0, 0, 1], abs=1e-14)


def test_pendant_n4_closed_form():
    expected = []
    for m in range(4):
        c = np.cos(2 * np.pi * m / 4)
        r = np.sqrt(c * c / 9 + 1 / 3)
        expected += [-c / 3 - r, -c / 3 + r]
    assert torus_eigenvalues(builtin("z_pendant"), 4) == pytest.approx(sorted(expected), abs=1e-13)


def test_two_pendants_zero_multiplicity():
    vals = torus_eigenvalues(builtin("z_two_pendants"), 3)
    assert np.sum(np.abs(vals) < 1e-12) >= 3


@pytest.mark.parametrize("name, n, tol", [("z1_lattice", 8, 1e-12), ("hexagonal", 6, 1e-10),
                                          ("c4_pendant_chain", 8, 1e-8)])
def test_examples(name, n, tol):
    assert compare_with_floquet(builtin(name), n) <= tol


def test_hexagonal_dirac_zeros_present():
    vals = torus_eigenvalues(builtin("hexagonal"), 6)
    assert np.sum(np.abs(vals) < 1e-10) >= 2


@pytest.mark.parametrize("name", BUILTINS)
@pytest.mark.parametrize("n", [3, 4, 6, 8])
def test_multiset_equivalence(name, n):
    g = builtin(name)
    if not _fits(g, n):
        pytest.skip("torus above the size cap")
    assert compare_with_floquet(g, n) <= 1e-8


@pytest.mark.parametrize("name", BUILTINS)
def test_minimum_is_minus_one(name):
    g = builtin(name)
    n = 4 if _fits(g, 4) else 3
    assert torus_eigenvalues(g, n)[0] == pytest.approx(-1.0, abs=1e-10)


@pytest.mark.parametrize("name", BUILTINS)
def test_bipartite_even_torus_symmetric(name):
    g = builtin(name)
    if not is_bipartite_periodic(g):
        pytest.skip("not bipartite")
    n = 4
    vals = torus_eigenvalues(g, n)
    assert np.allclose(vals, -vals[::-1], atol=1e-10)


def test_size_cap_and_minimum():
    with pytest.raises(ValueError):
        torus_graph(builtin("z1_lattice"), 2)
    with pytest.raises(ValueError):
        torus_graph(builtin("z3_lattice"), 17)


def test_loop_doubles_diagonal():
    # a zero-shift loop contributes 2 to its vertex degree
    from metricbands.graph_model import parse_graph
    g = parse_graph("dim 1\nvertex a\nedge a a 0\nedge a a 1")
    t = torus_graph(g, 3).matrix
    assert t[0, 0] == pytest.approx(-2 / 4)


def test_oracle_budget():
    start = time.perf_counter()
    for name in BUILTINS:
        g = builtin(name)
        for n in (3, 4, 6, 8):
            if _fits(g, n):
                compare_with_floquet(g, n)
    assert time.perf_counter() - start < 20
