import math
import time

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from metricbands.estimates import (CertificationReport, CheckRecord, check_prop31,
                                   preimage_measure, prop31_random_suite, star_set)
from metricbands.intervals import IntervalSet

from conftest import BUILTINS, report_for


@pytest.mark.parametrize("m, lam, pre", [(2.0, 0.0, math.pi), (0.0, 1.0, 0.0),
                                         (4 / 3, 1 / 3, 2.461919)])
def test_star_set(m, lam, pre):
    l, z = star_set(m)
    assert l == pytest.approx(lam, abs=1e-12)
    assert 2 * z == pytest.approx(pre, abs=1e-6)


@pytest.mark.parametrize("ivs, expected", [
    ([(-1, 1)], math.pi),
    ([(-1, -1 / 3), (1 / 3, 1)], 2.461919),
    ([(0, 0)], 0.0),
])
def test_preimage_measure(ivs, expected):
    assert preimage_measure(IntervalSet.from_intervals(ivs)) == pytest.approx(expected, abs=1e-6)


def test_star_preimage_of_top_interval():
    rec = check_prop31(IntervalSet.from_intervals([(0.9, 1.0)]))
    assert rec.passed
    m, pre, star = rec.lhs
    assert pre == pytest.approx(math.acos(-1.0) - math.acos(-0.9))
    assert star == pytest.approx(2 * math.acos(0.95), abs=1e-12)


@st.composite
def unions(draw):
    k = draw(st.integers(1, 4))
    cuts = sorted(draw(st.lists(st.floats(-1, 1), min_size=2 * k, max_size=2 * k, unique=True)))
    return IntervalSet.from_intervals(list(zip(cuts[::2], cuts[1::2])))


@settings(max_examples=300, deadline=None)
@given(unions())
def test_preimage_chain_property(s):
    # independent evaluation of the preimage measure by quadrature
    xs = np.linspace(0, math.pi, 200001)
    inside = np.zeros_like(xs, dtype=bool)
    for a, b in s.intervals:
        inside |= (-np.cos(xs) >= a) & (-np.cos(xs) <= b)
    assert preimage_measure(s) == pytest.approx(inside.mean() * math.pi, abs=1e-3)
    rec = check_prop31(s)
    values = rec.lhs + [rec.rhs[-1]]
    assert all(values[i] <= values[i + 1] + 1e-12 for i in range(3))


def test_random_suite_and_budget():
    start = time.perf_counter()
    rec = prop31_random_suite(seed=123)
    assert time.perf_counter() - start < 5
    assert rec.passed and "seed=123" in rec.detail


def test_report_rejects_duplicates():
    r = CertificationReport()
    r.add(CheckRecord("x", "pass"))
    with pytest.raises(ValueError):
        r.add(CheckRecord("x", "pass"))
    assert r.ok and r["x"].passed


def test_pendant_certification_values():
    cert = report_for("z_pendant").certification
    chain = cert["total_measure_chain"]
    values = chain.lhs + [chain.rhs[-1]]
    assert values == pytest.approx([4 / 3, 2.461919, 2.565100, 2.565100], abs=1e-6)
    assert values[2] == pytest.approx(values[3], abs=1e-9)
    gap = cert["gap_sum"]
    assert gap.lhs[0] == pytest.approx(0.679674, abs=1e-6)
    assert gap.rhs[1] == pytest.approx(math.pi * (1 - math.sqrt(2 / 3)), abs=1e-9)
    assert cert["infinite_gaps"].passed


def test_infinite_gap_preconditions():
    assert report_for("z1_lattice").certification["infinite_gaps"].status == "skipped"
    rec = report_for("z_two_pendants").certification["infinite_gaps"]
    # the flat band at pi/2 does not split the single gap
    assert rec.passed and rec.lhs[1] == 1
    gap = report_for("z_two_pendants").omega.gaps[0]
    assert gap.flat_points == pytest.approx((math.pi / 2,))


def test_hexagonal_loop_checks_skipped():
    cert = report_for("hexagonal").certification
    for name in ("shortcut_agreement", "loop_lower_edges", "precise_upper_edges",
                 "precise_band_sum", "loop_bipartite_edges"):
        assert cert[name].status == "skipped"


@pytest.mark.parametrize("name", BUILTINS)
def test_every_builtin_certifies(name):
    cert = report_for(name).certification
    assert cert.ok, [r.name for r in cert.failures()]
    assert all(r.status in ("pass", "skipped") for r in cert.records)


@pytest.mark.parametrize("name", BUILTINS)
def test_gap_identity(name):
    o = report_for(name).omega
    assert sum(g.length for g in o.gaps) == pytest.approx(math.pi - o.measure(), abs=1e-9)


def test_certification_is_deterministic():
    from metricbands import analyze, builtin
    a = analyze(builtin("c4_pendant_chain")).certification
    b = analyze(builtin("c4_pendant_chain")).certification
    assert [r.as_dict() for r in a.records] == [r.as_dict() for r in b.records]
