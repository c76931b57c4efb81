"""Brute-force reference: the normalized Laplacian of the finite N-torus quotient.

The torus graph has vertices (v, m) with m in (Z/N)^d and an edge
(v_j, m) -- (v_k, m + tau mod N) for every fundamental edge.  Its spectrum
is the union of the fiber spectra at theta in (2 pi / N) {0..N-1}^d, which
gives a check on the fiber assembly that shares no code with it.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .floquet import band_values_batch
from .graph_model import FundamentalGraph

__all__ = ["MAX_TORUS_SIZE", "TorusGraph", "torus_graph", "torus_eigenvalues",
           "floquet_multiset", "compare_with_floquet"]

MAX_TORUS_SIZE = 4096


@dataclass(frozen=True)
class TorusGraph:
    base: FundamentalGraph
    n: int
    matrix: np.ndarray


def torus_graph(g: FundamentalGraph, n: int) -> TorusGraph:
    if n < 3:
        raise ValueError("torus size must be >= 3")
    cells = list(product(range(n), repeat=g.dim))
    size = g.nu * len(cells)
    if size > MAX_TORUS_SIZE:
        raise ValueError(f"torus has {size} vertices, above the cap of {MAX_TORUS_SIZE}")
    cell_index = {c: i for i, c in enumerate(cells)}

    def vid(v, cell):
        return cell_index[cell] * g.nu + v

    adj = np.zeros((size, size))
    for cell in cells:
        for e in g.edges:
            other = tuple((c + t) % n for c, t in zip(cell, e.tau))
            a, b = vid(e.j, cell), vid(e.k, other)
            # a loop lands on the diagonal twice
            adj[a, b] += 1.0
            adj[b, a] += 1.0
    deg = adj.sum(axis=1)
    inv_sqrt = 1.0 / np.sqrt(deg)
    lap = -inv_sqrt[:, None] * adj * inv_sqrt[None, :]
    return TorusGraph(base=g, n=n, matrix=lap)


def torus_eigenvalues(g: FundamentalGraph, n: int) -> np.ndarray:
    """Sorted eigenvalues of the finite torus Laplacian (dense LAPACK solve)."""
    return np.linalg.eigvalsh(torus_graph(g, n).matrix)


def floquet_multiset(g: FundamentalGraph, n: int) -> np.ndarray:
    thetas = 2 * np.pi * np.array(list(product(range(n), repeat=g.dim)), dtype=float) / n
    return np.sort(band_values_batch(g, thetas).ravel())


def compare_with_floquet(g: FundamentalGraph, n: int) -> float:
    """Largest elementwise gap between the sorted torus and Floquet multisets."""
    return float(np.max(np.abs(torus_eigenvalues(g, n) - floquet_multiset(g, n))))
