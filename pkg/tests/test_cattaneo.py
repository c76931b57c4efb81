import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from metricbands.cattaneo import energy_spectrum, omega_spectrum, phi, phi_inv, unfold_momentum
from metricbands.graph_model import builtin, classify
from metricbands.spectrum import band_intervals

from conftest import BUILTINS, report_for

A13 = math.acos(1 / 3)   # 1.230959417
A_13 = math.acos(-1 / 3)  # 1.910633236


def _omega(name):
    g = builtin(name)
    return omega_spectrum(band_intervals(g), dim=g.dim)


def test_phi_values():
    assert phi_inv(-1.0) == 0.0
    assert phi_inv(-1 / 3) == pytest.approx(1.230959417, abs=1e-9)
    assert phi_inv(1 / 3) == pytest.approx(1.910633236, abs=1e-9)
    assert -math.cos(phi_inv(1 / 3)) == pytest.approx(1 / 3, abs=1e-15)
    assert phi(math.pi / 2) == pytest.approx(0.0, abs=1e-16)


def test_phi_domain():
    assert phi_inv(1 + 5e-13) == pytest.approx(math.pi)
    with pytest.raises(ValueError):
        phi_inv(1.1)
    with pytest.raises(ValueError):
        phi(-0.5)


@settings(max_examples=200, deadline=None)
@given(st.floats(-1, 1))
def test_phi_round_trip(lam):
    assert phi(phi_inv(lam)) == pytest.approx(lam, abs=1e-14)


def test_pendant_omega():
    o = _omega("z_pendant")
    assert np.allclose(o.ac_set.intervals, [(0, A13), (A_13, math.pi)], atol=1e-9)
    assert len(o.gaps) == 1
    assert (o.gaps[0].lo, o.gaps[0].hi) == pytest.approx((1.230959, 1.910633), abs=1e-6)
    assert o.pi_flat_band.placement == "embedded"
    assert o.pi_flat_band.note == "d=1: unverified"


def test_triangular_omega():
    o = _omega("triangular")
    assert np.allclose(o.ac_set.intervals, [(0, 2 * math.pi / 3)], atol=1e-6)
    assert o.pi_flat_band.placement == "in_gap"
    assert o.gaps[-1].lo == pytest.approx(2 * math.pi / 3, abs=1e-6)
    assert o.gaps[-1].flat_points == (math.pi,)


def test_two_pendants_omega():
    o = _omega("z_two_pendants")
    assert np.allclose(o.ac_set.intervals, [(0, math.pi / 3), (2 * math.pi / 3, math.pi)], atol=1e-9)
    discrete = [f for f in o.flat_bands if f.kind == "discrete"]
    assert len(discrete) == 1 and discrete[0].value == pytest.approx(math.pi / 2, abs=1e-9)


def test_unfold_lattice():
    u = unfold_momentum(_omega("z1_lattice"), 4 * math.pi)
    assert u.ac_set.intervals == ((0.0, 4 * math.pi),)
    dirichlet = [f for f in u.flat_bands if f.kind == "dirichlet"]
    assert [f.value for f in dirichlet] == pytest.approx([math.pi * n for n in range(1, 5)])
    assert all(f.placement == "embedded" for f in dirichlet)


def test_unfold_pendant_two_pi():
    u = unfold_momentum(_omega("z_pendant"), 2 * math.pi)
    expected = [(0, A13), (A_13, 2 * math.pi - A_13), (2 * math.pi - A13, 2 * math.pi)]
    assert np.allclose(u.ac_set.intervals, expected, atol=1e-9)


@pytest.mark.parametrize("name", BUILTINS)
def test_unfold_to_pi_is_omega(name):
    o = _omega(name)
    u = unfold_momentum(o, math.pi)
    assert np.allclose(u.ac_set.intervals, o.ac_set.intervals, atol=1e-12)


def test_energy_lattice():
    e = energy_spectrum(unfold_momentum(_omega("z1_lattice"), 4 * math.pi))
    assert e.ac_set.intervals[0] == pytest.approx((0.0, 16 * math.pi ** 2))
    assert len(e.ac_set.intervals) == 1
    assert e.flat_bands[0].value == pytest.approx(9.8696, abs=1e-4)


def test_energy_pendant_gaps():
    e = energy_spectrum(unfold_momentum(_omega("z_pendant"), 6 * math.pi))
    gaps = e.interior_gaps()
    assert (gaps[0].lo, gaps[0].hi) == pytest.approx((1.515261, 3.650518), abs=1e-3)
    # closed form: squares of 2 pi - arccos(-+1/3)
    second = ((2 * math.pi - A_13) ** 2, (2 * math.pi - A13) ** 2)
    assert (gaps[1].lo, gaps[1].hi) == pytest.approx(second, abs=1e-3)
    assert gaps[1].hi == pytest.approx(25.525, abs=1e-3)
    lengths = [g.length for g in gaps]
    assert all(a < b for a, b in zip(lengths, lengths[1:]))


def test_energy_cutoff_marks_truncation():
    u = unfold_momentum(_omega("z_pendant"), 2 * math.pi)
    e = energy_spectrum(u, e_max=10.0)
    assert e.cutoff == 10.0 and e.truncated[-1]
    assert e.ac_set.upper == 10.0


@pytest.mark.parametrize("name", BUILTINS)
def test_bipartite_pi_placement(name):
    cls = classify(builtin(name))
    o = _omega(name)
    embedded = o.pi_flat_band.placement == "embedded"
    assert embedded == cls.gamma_bipartite


@pytest.mark.parametrize("name", BUILTINS)
def test_full_spectrum_equivalence(name):
    o = _omega(name)
    t = band_intervals(builtin(name))
    from metricbands.spectrum import union
    assert (abs(o.measure() - math.pi) <= 1e-9) == (abs(union(t).measure() - 2) <= 1e-9)


def test_odd_fundamental_flat_band():
    o = _omega("c4_pendant_chain")
    assert any(f.kind == "discrete" and abs(f.value - math.pi / 2) <= 1e-8 for f in o.flat_bands)
