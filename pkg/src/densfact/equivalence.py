"""
Multiplicity of density factors.

Any k x p matrix ``A`` with orthonormal rows (``A A* = I_k``) maps a k-factor
``Psi`` of rho to the p-factor ``Psi A`` of the same rho. Conversely every
factor ``Phi`` of rho equals ``Psi0 A0`` for the minimum orthonormal factor
``Psi0 = U Sigma`` and ``A0 = Sigma^-2 Psi0* Phi``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .density_model import DensityFactor, gram
from .errors import (
    DimensionMismatch,
    InvalidDimensions,
    NotAFactorOf,
    NotCoIsometry,
    NotMinimalOrthonormal,
)
from .linalg_core import (
    DEFAULT_TOL,
    SpectralData,
    as_cmatrix,
    frobenius,
    frozen,
    qr_orthonormal_rows,
    threshold,
)


@dataclass(frozen=True)
class CoIsometry:
    """A k x p matrix (k <= p) meant to satisfy ``A A* = I_k``.

    Construction only checks the shape; use :func:`verify_coisometry` to
    enforce the orthonormality of the rows.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = as_cmatrix(self.matrix, "co-isometry")
        if m.shape[0] > m.shape[1]:
            raise InvalidDimensions(
                f"a {m.shape[0]} x {m.shape[1]} matrix cannot have orthonormal rows"
            )
        object.__setattr__(self, "matrix", frozen(m))

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape


def coisometry_defect(a: CoIsometry) -> float:
    """``||A A* - I_k||_F``."""
    k = a.shape[0]
    return frobenius(a.matrix @ a.matrix.conj().T - np.eye(k))


def verify_coisometry(a, tol: float = DEFAULT_TOL) -> CoIsometry:
    if not isinstance(a, CoIsometry):
        a = CoIsometry(a)
    defect = coisometry_defect(a)
    if defect > threshold(tol):
        raise NotCoIsometry(f"||A A* - I||_F = {defect:.3e} exceeds tolerance {tol:g}")
    return a


def expand_factor(f: DensityFactor, a: CoIsometry, tol: float = DEFAULT_TOL) -> DensityFactor:
    """``Phi = Psi A``, a p-factor of the same density operator."""
    if f.size != a.shape[0]:
        raise DimensionMismatch(f"factor has {f.size} columns but A has {a.shape[0]} rows")
    verify_coisometry(a, tol)
    return DensityFactor(f.matrix @ a.matrix)


def spectral_data_of_minimum(psi0: DensityFactor, tol: float = DEFAULT_TOL) -> SpectralData:
    """Recover ``(Sigma^2, U)`` from a minimum orthonormal factor ``U Sigma``.

    Columns keep their given order, so the eigenvalues need not be sorted.
    """
    g = gram(psi0)
    weights = g.diagonal().real
    off = frobenius(g - np.diag(g.diagonal()))
    if off > threshold(tol):
        raise NotMinimalOrthonormal(f"columns are not orthogonal (off-diagonal Gram norm {off:.3e})")
    if np.any(weights <= tol):
        raise NotMinimalOrthonormal("a minimum factor cannot contain zero columns")
    return SpectralData(weights, psi0.matrix / np.sqrt(weights))


def relate_to_minimum(
    psi0: DensityFactor,
    phi: DensityFactor,
    spec: SpectralData | None = None,
    tol: float = DEFAULT_TOL,
) -> CoIsometry:
    """Return ``A0 = Sigma^-2 Psi0* Phi`` so that ``Phi = Psi0 A0``.

    ``spec`` should be the spectral data ``psi0`` was built from; when omitted
    it is read off the Gram matrix of ``psi0``.

    Raises
    ------
    NotMinimalOrthonormal
        If ``psi0`` does not have orthogonal nonzero columns matching ``spec``.
    NotAFactorOf
        If ``phi phi*`` differs from ``psi0 psi0*``.
    """
    if spec is None:
        spec = spectral_data_of_minimum(psi0, tol)
    else:
        g = gram(psi0)
        if g.shape[0] != spec.rank:
            raise NotMinimalOrthonormal(
                f"psi0 has {g.shape[0]} columns but the spectrum has rank {spec.rank}"
            )
        if frobenius(g - spec.sigma_squared) > threshold(10 * tol):
            raise NotMinimalOrthonormal("psi0* psi0 is not the diagonal Sigma^2 of the spectrum")
    if phi.dim != psi0.dim:
        raise DimensionMismatch(f"phi acts on C^{phi.dim}, psi0 on C^{psi0.dim}")
    rho = psi0.matrix @ psi0.matrix.conj().T
    residual = frobenius(phi.matrix @ phi.matrix.conj().T - rho)
    if residual > threshold(tol, frobenius(rho)):
        raise NotAFactorOf(f"||phi phi* - psi0 psi0*||_F = {residual:.3e}")
    a0 = (psi0.matrix.conj().T @ phi.matrix) / spec.eigenvalues[:, None]
    return CoIsometry(a0)


def random_coisometry(k: int, p: int, seed=None) -> CoIsometry:
    """First k rows of a Haar-random p x p unitary.

    ``seed`` is anything accepted by :func:`numpy.random.default_rng`,
    including an existing Generator (which is advanced).
    """
    if not 1 <= k <= p:
        raise InvalidDimensions(f"need 1 <= k <= p, got k={k}, p={p}")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((k, p)) + 1j * rng.standard_normal((k, p))) / np.sqrt(2)
    return CoIsometry(qr_orthonormal_rows(z))


def dft_coisometry(k: int, p: int) -> CoIsometry:
    """First k rows of the unitary p-point DFT matrix, ``exp(-2 pi i m j / p) / sqrt(p)``."""
    if not 1 <= k <= p:
        raise InvalidDimensions(f"need 1 <= k <= p, got k={k}, p={p}")
    m = np.arange(k)[:, None]
    j = np.arange(p)[None, :]
    # reduce m*j mod p first so the angle stays exact for larger indices
    return CoIsometry(np.exp(-2j * np.pi * ((m * j) % p) / p) / np.sqrt(p))


def same_density(f1: DensityFactor, f2: DensityFactor, tol: float = DEFAULT_TOL) -> bool:
    if f1.dim != f2.dim:
        raise DimensionMismatch(f"factors act on C^{f1.dim} and C^{f2.dim}")
    diff = f1.matrix @ f1.matrix.conj().T - f2.matrix @ f2.matrix.conj().T
    return frobenius(diff) <= tol
