"""Minimum orthonormal density factors, from the EID of rho or the SVD of any factor."""

from __future__ import annotations

import math

import numpy as np

from .density_model import DensityFactor, DensityOperator
from .errors import NotAFactorOf
from .linalg_core import DEFAULT_TOL, SpectralData, frobenius, hermitian_eid, svd, threshold


def minimum_df_from_eid(
    d: DensityOperator, tol: float = DEFAULT_TOL
) -> tuple[DensityFactor, SpectralData]:
    """Return ``Psi0 = U Sigma`` built from the positive eigenpairs of rho.

    The columns of ``Psi0`` are orthogonal with squared norms equal to the
    eigenvalues, and there are exactly ``rank(rho)`` of them.
    """
    spec = hermitian_eid(d.matrix, tol)
    psi0 = spec.vectors @ spec.sigma
    return DensityFactor(psi0), spec


def minimum_df_from_svd(
    f: DensityFactor, tol: float = DEFAULT_TOL
) -> tuple[DensityFactor, np.ndarray]:
    """Reduce an arbitrary factor ``Psi = U Sigma V*`` to ``Psi0 = U Sigma``.

    Returns the minimum factor and ``V`` (k x r, orthonormal columns).
    """
    u, sigma, v = svd(f.matrix, tol)
    return DensityFactor(u @ sigma), v


def _cluster_projectors(
    values: np.ndarray, vectors: np.ndarray, gap: float
) -> list[tuple[slice, np.ndarray]]:
    """Spectral projectors of runs of eigenvalues closer than ``gap``."""
    out = []
    start = 0
    for i in range(1, len(values) + 1):
        if i == len(values) or values[i - 1] - values[i] > gap:
            block = vectors[:, start:i]
            out.append((slice(start, i), block @ block.conj().T))
            start = i
    return out


def assert_same_minimum(
    d: DensityOperator, f: DensityFactor, tol: float = DEFAULT_TOL
) -> bool:
    """Check that the EID route on ``d`` and the SVD route on ``f`` agree.

    Both minimum factors are compared through their eigenvalues and through
    the spectral projector of every eigenvalue cluster, which removes the
    per-column phase (and, for degenerate eigenvalues, unitary) freedom.

    Raises
    ------
    NotAFactorOf
        If ``f f*`` is not ``d`` within ``tol``.
    """
    residual = frobenius(f.matrix @ f.matrix.conj().T - d.matrix)
    if residual > threshold(tol, frobenius(d.matrix)):
        raise NotAFactorOf(f"||f f* - rho||_F = {residual:.3e}")

    psi_eid, spec = minimum_df_from_eid(d, tol)
    psi_svd, _ = minimum_df_from_svd(f, tol)
    if psi_eid.size != psi_svd.size:
        return False
    eig_svd = np.sum(np.abs(psi_svd.matrix) ** 2, axis=0)
    if np.max(np.abs(spec.eigenvalues - eig_svd), initial=0.0) > 10 * tol:
        return False

    # eigenvectors inside a cluster narrower than sqrt(tol) are ill-determined
    gap = math.sqrt(tol)
    u_svd = psi_svd.matrix / np.sqrt(eig_svd)
    for block, proj in _cluster_projectors(spec.eigenvalues, spec.vectors, gap):
        other = u_svd[:, block]
        if frobenius(proj - other @ other.conj().T) > 10 * tol:
            return False
    return True
