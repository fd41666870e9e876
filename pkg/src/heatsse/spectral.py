"""Laplacian eigendecomposition and the heat semigroup.

The Laplacian ``L = I - K`` of a reversible chain is self-adjoint under the
pi-inner product. Conjugating by ``diag(sqrt(pi))`` makes it a symmetric
matrix, so a dense symmetric eigensolver gives pi-orthonormal
eigenfunctions ``psi_i`` after undoing the scaling.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import ReversibleChain
from .errors import EigensolverFailure, InputError

RESIDUAL_TOL = 1e-8
DEGENERACY_GAP = 1e-10
NULLITY_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class SpectralBasis:
    """Eigenvalues ``lambdas`` (ascending) and eigenfunctions as columns of ``psis``."""

    chain: ReversibleChain
    lambdas: np.ndarray
    psis: np.ndarray

    @property
    def n(self) -> int:
        return self.lambdas.shape[0]

    @property
    def pi(self) -> np.ndarray:
        return self.chain.pi

    def coefficients(self, f) -> np.ndarray:
        """Expansion coefficients ``<f, psi_i>``."""
        return self.psis.T @ (self.pi * np.asarray(f, dtype=np.float64))


def _canonical_cluster_basis(P, d):
    """Deterministic orthonormal basis for the range of projector P (rank d).

    Gram-Schmidt over the projected unit vectors ``P e_j`` in index order.
    """
    basis = []
    for j in range(P.shape[0]):
        v = P[:, j].copy()
        for b in basis:
            v -= (b @ v) * b
        norm = np.linalg.norm(v)
        if norm > 1e-6:
            basis.append(v / norm)
            if len(basis) == d:
                break
    B, _ = np.linalg.qr(np.column_stack(basis))
    return _fix_signs(B)


def _fix_signs(U):
    for i in range(U.shape[1]):
        col = U[:, i]
        lead = np.flatnonzero(np.abs(col) > 1e-8 * np.abs(col).max())[0]
        if col[lead] < 0:
            U[:, i] = -col
    return U


def decompose(c: ReversibleChain) -> SpectralBasis:
    """Eigendecomposition of the chain's Laplacian.

    ``psi_1`` is the constant function 1 and ``lambda_1`` is exactly 0.
    Eigenvectors inside a numerically repeated eigenvalue (gap below 1e-10)
    are replaced by a canonical basis, so the output depends only on the
    input matrix.

    Raises
    ------
    EigensolverFailure
        If any residual ``||L psi_i - lambda_i psi_i||`` exceeds 1e-8.
    """
    pi = c.pi
    s = np.sqrt(pi)
    # flow / (sqrt(pi_x) sqrt(pi_y)) is D^{1/2} K D^{-1/2}, symmetric by reversibility
    A = c.flow / np.outer(s, s)
    M = np.eye(c.n) - 0.5 * (A + A.T)
    lam, U = np.linalg.eigh(M)
    lam[0] = 0.0
    start = 0
    while start < c.n:
        stop = start + 1
        while stop < c.n and lam[stop] - lam[stop - 1] < DEGENERACY_GAP:
            stop += 1
        block = U[:, start:stop]
        if start == 0:
            # the kernel direction is exactly sqrt(pi); the rest of the cluster is orthogonal to it
            if stop > 1:
                P = block @ block.T - np.outer(s, s)
                U[:, 1:stop] = _canonical_cluster_basis(P, stop - 1)
            U[:, 0] = s
        elif stop - start > 1:
            U[:, start:stop] = _canonical_cluster_basis(block @ block.T, stop - start)
        else:
            U[:, start:stop] = _fix_signs(block)
        start = stop
    psis = U / s[:, None]
    psis[:, 0] = 1.0
    basis = SpectralBasis(c, lam, psis)
    res = eigen_residuals(basis)
    if res.max() > RESIDUAL_TOL:
        raise EigensolverFailure(f"eigen-residual {res.max():.3g} exceeds {RESIDUAL_TOL}")
    return basis


def eigen_residuals(b: SpectralBasis) -> np.ndarray:
    """pi-norm of ``L psi_i - lambda_i psi_i`` for each i."""
    R = b.chain.laplacian @ b.psis - b.psis * b.lambdas
    return np.sqrt(b.pi @ (R * R))


def heat_apply(b: SpectralBasis, t: float, f) -> np.ndarray:
    """``H_t f = sum_i exp(-t lambda_i) <f, psi_i> psi_i``."""
    if t < 0:
        raise InputError(f"heat time must be nonnegative, got {t}")
    return b.psis @ (np.exp(-t * b.lambdas) * b.coefficients(f))


def heat_trace(b: SpectralBasis, t: float) -> float:
    return float(np.sum(np.exp(-t * b.lambdas)))


def laplacian_heat_trace(b: SpectralBasis, t: float) -> float:
    return float(np.sum(b.lambdas * np.exp(-t * b.lambdas)))


def point_mass(pi, x) -> np.ndarray:
    """``phi_x = 1_x / pi(x)``, the density of the point mass at x (mean one)."""
    phi = np.zeros(pi.shape[0])
    phi[x] = 1.0 / pi[x]
    return phi


def heat_trace_by_states(b: SpectralBasis, t: float):
    """Per-state evaluation of tr(H_t) and tr(L H_t) through heat-propagated point masses.

    Returns ``(E_x <g_x, g_x>, E_x <g_x, L g_x>)`` with ``g_x = H_{t/2} phi_x``;
    an independent route to :func:`heat_trace` and :func:`laplacian_heat_trace`.
    """
    c = b.chain
    tr = 0.0
    ltr = 0.0
    for x in range(b.n):
        g = heat_apply(b, t / 2, point_mass(c.pi, x))
        tr += c.pi[x] * c.inner(g, g)
        ltr += c.pi[x] * c.inner(g, c.laplacian @ g)
    return tr, ltr


def analytic_nullity(b: SpectralBasis, eta: float) -> int:
    """Number of eigenvalues ``<= eta`` (absolute slack 1e-12)."""
    if eta < 0:
        raise InputError(f"eta must be nonnegative, got {eta}")
    return int(np.count_nonzero(b.lambdas <= eta + NULLITY_SLACK))
