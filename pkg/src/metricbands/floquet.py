"""Floquet fiber matrices of the normalized Laplacian and their eigenvalues."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph_model import FundamentalGraph

__all__ = [
    "FiberMatrix",
    "BandValues",
    "fiber_matrix",
    "fiber_matrices",
    "hermitian_eigenvalues",
    "band_values",
    "band_values_batch",
    "ground_state_residual",
]

_MAX_SWEEPS = 60


@dataclass(frozen=True)
class FiberMatrix:
    theta: np.ndarray
    entries: np.ndarray


@dataclass(frozen=True)
class BandValues:
    theta: np.ndarray
    lambdas: np.ndarray


def fiber_matrices(g: FundamentalGraph, thetas) -> np.ndarray:
    """Stack of fiber matrices, shape ``(..., nu, nu)`` for thetas of shape ``(..., d)``.

    Each edge ``(j, k, tau)`` puts ``exp(i<tau, theta>)`` at ``(j, k)`` and its
    conjugate at ``(k, j)``; a loop edge therefore adds ``2 cos<tau, theta>``
    to the diagonal.  The result is scaled by ``-1/sqrt(deg_j deg_k)``.
    """
    thetas = np.asarray(thetas, dtype=float)
    if thetas.shape[-1:] != (g.dim,):
        raise ValueError(f"theta must have {g.dim} components, got shape {thetas.shape}")
    batch = thetas.shape[:-1]
    nu = g.nu
    half = np.zeros(batch + (nu, nu), dtype=complex)
    if g.edges:
        phases = np.exp(1j * (thetas @ g.shifts().T))  # (..., n_edges)
        for idx, e in enumerate(g.edges):
            half[..., e.j, e.k] += phases[..., idx]
    adjacency = half + np.conj(np.swapaxes(half, -1, -2))
    scale = 1.0 / np.sqrt(np.asarray(g.degrees, dtype=float))
    return -(adjacency * scale[:, None] * scale[None, :])


def fiber_matrix(g: FundamentalGraph, theta) -> FiberMatrix:
    theta = np.asarray(theta, dtype=float).reshape(-1)
    if theta.shape != (g.dim,):
        raise ValueError(f"theta must have {g.dim} components, got {theta.shape[0]}")
    return FiberMatrix(theta=theta, entries=fiber_matrices(g, theta))


def hermitian_eigenvalues(matrix) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix or a stack of them.

    Cyclic complex Jacobi, vectorized over the leading (batch) axes.  Each
    rotation first removes the phase of the pivot entry with a diagonal
    unitary and then applies a real plane rotation.
    """
    if isinstance(matrix, FiberMatrix):
        matrix = matrix.entries
    a = np.array(matrix, dtype=complex, copy=True)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ValueError("expected a square matrix or a stack of square matrices")
    batch_shape = a.shape[:-2]
    n = a.shape[-1]
    a = a.reshape((-1, n, n))
    if n == 1:
        return a[:, 0, 0].real.reshape(batch_shape + (1,))

    fro = np.sqrt(np.sum(np.abs(a) ** 2, axis=(1, 2)))
    threshold = (1e-15 * np.maximum(fro, 1e-300)) ** 2
    pairs = [(p, q) for p in range(n - 1) for q in range(p + 1, n)]
    offdiag = ~np.eye(n, dtype=bool)
    for _ in range(_MAX_SWEEPS):
        off = np.sum(np.abs(a[:, offdiag]) ** 2, axis=1)
        active = off > threshold
        if not active.any():
            break
        idx = np.nonzero(active)[0]
        sub = a[idx]
        for p, q in pairs:
            apq = sub[:, p, q]
            r = np.abs(apq)
            live = r > 0.0
            if not live.any():
                continue
            r_safe = np.where(live, r, 1.0)
            phase = np.where(live, apq / r_safe, 1.0)  # e^{i phi}
            app = sub[:, p, p].real.copy()
            aqq = sub[:, q, q].real.copy()
            tau = (aqq - app) / (2.0 * r_safe)
            t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
            t = np.where(live, t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            ph_c = np.conj(phase)
            # columns: A <- A U
            col_p = sub[:, :, p].copy()
            col_q = sub[:, :, q].copy()
            sub[:, :, p] = c[:, None] * col_p - (s * ph_c)[:, None] * col_q
            sub[:, :, q] = s[:, None] * col_p + (c * ph_c)[:, None] * col_q
            # rows: A <- U^H A
            row_p = sub[:, p, :].copy()
            row_q = sub[:, q, :].copy()
            sub[:, p, :] = c[:, None] * row_p - (s * phase)[:, None] * row_q
            sub[:, q, :] = s[:, None] * row_p + (c * phase)[:, None] * row_q
            sub[:, p, p] = app - t * r
            sub[:, q, q] = aqq + t * r
            sub[:, p, q] = 0.0
            sub[:, q, p] = 0.0
        a[idx] = sub
    else:
        raise RuntimeError("Jacobi eigensolver did not converge")
    w = np.sort(np.diagonal(a, axis1=1, axis2=2).real, axis=1)
    return w.reshape(batch_shape + (n,))


def band_values_batch(g: FundamentalGraph, thetas) -> np.ndarray:
    """Sorted band functions at each theta, shape ``(..., nu)``."""
    return hermitian_eigenvalues(fiber_matrices(g, thetas))


def band_values(g: FundamentalGraph, theta) -> BandValues:
    m = fiber_matrix(g, theta)
    return BandValues(theta=m.theta, lambdas=hermitian_eigenvalues(m.entries))


def ground_state_residual(g: FundamentalGraph) -> float:
    """``|| Delta(0) u + u ||`` for u proportional to (sqrt(deg_n))."""
    u = np.sqrt(np.asarray(g.degrees, dtype=float))
    u /= np.linalg.norm(u)
    m = fiber_matrices(g, np.zeros(g.dim))
    return float(np.linalg.norm(m @ u + u))
