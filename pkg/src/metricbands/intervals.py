"""Finite unions of closed intervals on the real line.

Spectra here are unions of bands (non-degenerate closed intervals) plus a
few isolated points coming from flat bands.  Isolated points carry no
measure and never split a gap; they are kept separately in ``points``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

__all__ = ["IntervalSet", "Gap"]


@dataclass(frozen=True)
class Gap:
    """Open interval ``(lo, hi)`` of the complement, with flat points inside it."""

    lo: float
    hi: float
    flat_points: tuple[float, ...] = ()

    @property
    def length(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class IntervalSet:
    intervals: tuple[tuple[float, float], ...] = ()
    points: tuple[float, ...] = field(default=())

    @classmethod
    def from_intervals(cls, intervals: Iterable[Sequence[float]], points: Iterable[float] = (),
                       merge_tol: float = 0.0) -> "IntervalSet":
        """Normalize: sort, merge overlapping or touching intervals.

        Intervals closer than ``merge_tol`` are treated as touching.  A
        degenerate interval ``[a, a]`` becomes a point; points covered by an
        interval are absorbed.
        """
        proper = []
        pts = list(points)
        for a, b in intervals:
            a, b = float(a), float(b)
            if b < a:
                raise ValueError(f"interval [{a}, {b}] has lo > hi")
            if b > a:
                proper.append((a, b))
            else:
                pts.append(a)
        proper.sort()
        merged: list[list[float]] = []
        for a, b in proper:
            if merged and a <= merged[-1][1] + merge_tol:
                merged[-1][1] = max(merged[-1][1], b)
            else:
                merged.append([a, b])
        kept = []
        for p in sorted(float(x) for x in pts):
            if any(a <= p <= b for a, b in merged):
                continue
            if kept and p - kept[-1] <= merge_tol:
                continue
            kept.append(p)
        return cls(tuple((a, b) for a, b in merged), tuple(kept))

    # -- queries -----------------------------------------------------------

    def measure(self) -> float:
        return float(sum(b - a for a, b in self.intervals))

    def is_empty(self) -> bool:
        return not self.intervals and not self.points

    @property
    def lower(self) -> float:
        return min([a for a, _ in self.intervals] + list(self.points))

    @property
    def upper(self) -> float:
        return max([b for _, b in self.intervals] + list(self.points))

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.ac_contains(x, tol) or any(abs(x - p) <= tol for p in self.points)

    def ac_contains(self, x: float, tol: float = 0.0) -> bool:
        """Membership in the union of the non-degenerate intervals."""
        return any(a - tol <= x <= b + tol for a, b in self.intervals)

    def gaps(self, hull: Sequence[float], extra_points: Iterable[float] = (),
             tol: float = 1e-12) -> list[Gap]:
        """Components of ``hull`` minus the non-degenerate intervals.

        The leading and trailing pieces count as gaps.  Each gap lists the
        isolated points (own points plus ``extra_points``) lying in it; a
        point sitting exactly at the hull's upper end is attributed to the
        trailing gap.
        """
        lo, hi = float(hull[0]), float(hull[1])
        flats = sorted(set(self.points) | {float(p) for p in extra_points})
        edges = [(a, b) for a, b in self.intervals if b >= lo and a <= hi]
        pieces = []
        cursor = lo
        for a, b in edges:
            if a > cursor:
                pieces.append((cursor, a))
            cursor = max(cursor, b)
        if cursor < hi:
            pieces.append((cursor, hi))
        out = []
        for a, b in pieces:
            inside = tuple(p for p in flats
                           if a < p < b or (abs(p - hi) <= tol and abs(b - hi) <= tol and p > a))
            out.append(Gap(a, b, inside))
        return out

    # -- transformations ---------------------------------------------------

    def map_increasing(self, f: Callable[[float], float]) -> "IntervalSet":
        """Image under a strictly increasing function."""
        return IntervalSet(tuple((f(a), f(b)) for a, b in self.intervals),
                           tuple(f(p) for p in self.points))

    def reflect(self, center_twice: float) -> "IntervalSet":
        """Image under ``x -> center_twice - x``."""
        return IntervalSet(tuple((center_twice - b, center_twice - a) for a, b in reversed(self.intervals)),
                           tuple(center_twice - p for p in reversed(self.points)))

    def translate(self, shift: float) -> "IntervalSet":
        return IntervalSet(tuple((a + shift, b + shift) for a, b in self.intervals),
                           tuple(p + shift for p in self.points))

    def union(self, other: "IntervalSet", merge_tol: float = 0.0) -> "IntervalSet":
        return IntervalSet.from_intervals(self.intervals + other.intervals,
                                          self.points + other.points, merge_tol)

    def clip(self, lo: float, hi: float) -> "IntervalSet":
        ivs = []
        pts = [p for p in self.points if lo <= p <= hi]
        for a, b in self.intervals:
            a2, b2 = max(a, lo), min(b, hi)
            if b2 > a2:
                ivs.append((a2, b2))
            elif b2 == a2:
                pts.append(a2)
        return IntervalSet.from_intervals(ivs, pts)

    def elements(self) -> list[tuple[float, float]]:
        """Intervals and points (as degenerate intervals), sorted."""
        return sorted(list(self.intervals) + [(p, p) for p in self.points])

    def hausdorff(self, other: "IntervalSet") -> float:
        if self.is_empty() or other.is_empty():
            return 0.0 if self.is_empty() and other.is_empty() else float("inf")
        return max(_directed_hausdorff(self, other), _directed_hausdorff(other, self))


def _distance(x: float, elems: list[tuple[float, float]]) -> float:
    return min(0.0 if a <= x <= b else min(abs(x - a), abs(x - b)) for a, b in elems)


def _directed_hausdorff(a: IntervalSet, b: IntervalSet) -> float:
    target = b.elements()
    midpoints = [(target[i][1] + target[i + 1][0]) / 2 for i in range(len(target) - 1)]
    worst = 0.0
    for lo, hi in a.elements():
        candidates = [lo, hi] + [m for m in midpoints if lo <= m <= hi]
        worst = max(worst, max(_distance(x, target) for x in candidates))
    return worst
