import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from metricbands.intervals import IntervalSet


def test_merge_touching_and_points():
    s = IntervalSet.from_intervals([(0, 1), (1, 2), (3, 3), (1.5, 1.5)])
    assert s.intervals == ((0.0, 2.0),) and s.points == (3.0,)
    assert s.measure() == 2.0


def test_merge_tolerance():
    s = IntervalSet.from_intervals([(-1, -1e-14), (1e-14, 1)], merge_tol=1e-9)
    assert s.intervals == ((-1.0, 1.0),)


def test_reversed_interval_rejected():
    with pytest.raises(ValueError):
        IntervalSet.from_intervals([(1, 0)])


def test_gaps_with_trailing_piece_and_flat_points():
    s = IntervalSet.from_intervals([(-1, -1 / 3), (1 / 3, 0.5)])
    gaps = s.gaps((-1, 1), extra_points=[0.0, 1.0])
    assert [(g.lo, g.hi) for g in gaps] == [(-1 / 3, 1 / 3), (0.5, 1.0)]
    assert gaps[0].flat_points == (0.0,) and gaps[1].flat_points == (1.0,)


def test_transforms():
    s = IntervalSet.from_intervals([(0, 1), (2, 3)], [5])
    assert s.reflect(6).intervals == ((3.0, 4.0), (5.0, 6.0)) and s.reflect(6).points == (1.0,)
    assert s.translate(1).intervals == ((1.0, 2.0), (3.0, 4.0))
    assert s.clip(0.5, 2.5).intervals == ((0.5, 1.0), (2.0, 2.5))
    assert s.map_increasing(lambda x: x * x).intervals == ((0.0, 1.0), (4.0, 9.0))


def test_hausdorff_known():
    a = IntervalSet.from_intervals([(0, 1), (3, 4)])
    b = IntervalSet.from_intervals([(0, 4)])
    assert a.hausdorff(b) == pytest.approx(1.0)
    assert a.hausdorff(a) == 0.0


@st.composite
def interval_sets(draw):
    cuts = sorted(draw(st.lists(st.floats(-1, 1), min_size=2, max_size=8, unique=True)))
    if len(cuts) % 2:
        cuts = cuts[:-1]
    pts = draw(st.lists(st.floats(-1, 1), max_size=2))
    return IntervalSet.from_intervals(list(zip(cuts[::2], cuts[1::2])), pts)


@settings(max_examples=100, deadline=None)
@given(interval_sets(), interval_sets())
def test_hausdorff_matches_dense_sampling(a, b):
    xs = np.linspace(-1, 1, 4001)

    def dist(x, s):
        return min(0.0 if lo <= x <= hi else min(abs(x - lo), abs(x - hi)) for lo, hi in s.elements())

    def sample(s):
        out = [p for p in s.points]
        for lo, hi in s.intervals:
            out += [lo, hi] + [x for x in xs if lo <= x <= hi]
        return out

    brute = max(max(dist(x, b) for x in sample(a)), max(dist(x, a) for x in sample(b)))
    assert a.hausdorff(b) >= brute - 1e-12
    assert a.hausdorff(b) <= brute + 2 / 4000 + 1e-12


@settings(max_examples=100, deadline=None)
@given(interval_sets())
def test_gaps_complement_measure(s):
    gaps = s.gaps((-1, 1))
    assert sum(g.length for g in gaps) + s.measure() == pytest.approx(2.0, abs=1e-12)
