"""
Dense complex linear algebra kernels.

Matrices are plain two-dimensional ``numpy`` arrays of dtype ``complex128``.
The Hermitian eigendecomposition is a cyclic complex Jacobi iteration; the
SVD is built on top of it through the smaller Gram matrix. Every routine
returns fresh arrays and applies a fixed phase convention so that identical
inputs give bit-identical outputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidDimensions,
    NonFiniteEntry,
    NotHermitian,
    NotPositiveSemidefinite,
    RankDeficient,
)

DEFAULT_TOL = 1e-10
ABS_FLOOR = 1e-12

# relative modulus window inside which two entries count as tied for the pivot
_PIVOT_TIE = 1e-10
_MAX_SWEEPS = 100


def as_cmatrix(m, name: str = "matrix") -> np.ndarray:
    """Return ``m`` as a finite 2-D complex128 array (always a copy)."""
    arr = np.array(m, dtype=np.complex128)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise InvalidDimensions(f"{name} must be two-dimensional, got ndim={arr.ndim}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteEntry(f"{name} contains NaN or Inf entries")
    return arr


def frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def threshold(tol: float, scale: float = 1.0) -> float:
    """Relative tolerance ``tol * scale`` with an absolute floor."""
    return max(tol * scale, ABS_FLOOR)


def frobenius(m: np.ndarray) -> float:
    return float(np.linalg.norm(m))


def adjoint(m) -> np.ndarray:
    """Conjugate transpose."""
    return as_cmatrix(m).conj().T.copy()


def matmul(a, b) -> np.ndarray:
    a = as_cmatrix(a, "a")
    b = as_cmatrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def numeric_rank(singular_values: Sequence[float], tol: float = DEFAULT_TOL) -> int:
    """Count the values strictly above ``tol * max(max(values), 1)``."""
    values = np.asarray(singular_values, dtype=float)
    if values.size == 0:
        return 0
    cutoff = tol * max(float(values.max()), 1.0)
    return int(np.count_nonzero(values > cutoff))


def _pivot_index(col: np.ndarray) -> int:
    mods = np.abs(col)
    top = mods.max()
    if top == 0.0:
        return 0
    return int(np.flatnonzero(mods >= top * (1.0 - _PIVOT_TIE))[0])


def fix_phases(cols: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Rotate each column so its pivot entry is real and positive.

    The pivot is the entry of largest modulus, ties going to the lowest row.
    Returns the rotated columns, the unit phases applied and the pivot rows.
    """
    out = cols.copy()
    ncols = cols.shape[1]
    phases = np.ones(ncols, dtype=np.complex128)
    pivots = np.zeros(ncols, dtype=int)
    for j in range(ncols):
        i = _pivot_index(cols[:, j])
        pivots[j] = i
        z = cols[i, j]
        if z != 0:
            phases[j] = abs(z) / z
            out[:, j] *= phases[j]
            out[i, j] = abs(out[i, j])
    return out, phases, pivots


def _jacobi(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi sweeps on a Hermitian matrix; returns (eigenvalues, vectors)."""
    n = a.shape[0]
    a = a.copy()
    v = np.eye(n, dtype=np.complex128)
    scale = frobenius(a)
    if n < 2 or scale == 0.0:
        return a.diagonal().real.copy(), v
    stop = np.finfo(float).eps * scale
    for _ in range(_MAX_SWEEPS):
        off = math.sqrt(max(scale**2 - float(np.sum(np.abs(a.diagonal()) ** 2)), 0.0))
        # the cheap estimate above loses accuracy near convergence; recheck exactly
        if off <= 1e-3 * scale:
            off = frobenius(a - np.diag(a.diagonal()))
        if off <= stop:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                b = abs(apq)
                if b == 0.0:
                    continue
                phase = apq / b
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * b)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                g = np.array(
                    [[c, s], [-s * phase.conjugate(), c * phase.conjugate()]],
                    dtype=np.complex128,
                )
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, idx] = v[:, idx] @ g
    return a.diagonal().real.copy(), v


def _canonical_order(values: np.ndarray, pivots: np.ndarray, tie: float) -> np.ndarray:
    order = sorted(range(len(values)), key=lambda i: -values[i])
    # within runs of equal eigenvalues, order by pivot row
    result: list[int] = []
    run: list[int] = []
    for i in order:
        if run and values[run[-1]] - values[i] > tie:
            result.extend(sorted(run, key=lambda j: (pivots[j], j)))
            run = []
        run.append(i)
    result.extend(sorted(run, key=lambda j: (pivots[j], j)))
    return np.array(result, dtype=int)


@dataclass(frozen=True)
class SpectralData:
    """Positive part of a Hermitian PSD spectrum.

    Attributes
    ----------
    eigenvalues : ndarray, shape (r,)
        Positive eigenvalues, descending.
    vectors : ndarray, shape (n, r)
        Orthonormal eigenvectors, one per column.
    sigma : ndarray, shape (r, r)
        ``diag(sqrt(eigenvalues))``.
    """

    eigenvalues: np.ndarray
    vectors: np.ndarray
    sigma: np.ndarray = field(init=False)

    def __post_init__(self):
        vals = np.array(self.eigenvalues, dtype=float).reshape(-1)
        vecs = np.array(self.vectors, dtype=np.complex128)
        if vecs.ndim != 2 or vecs.shape[1] != vals.size:
            raise InvalidDimensions(
                f"{vals.size} eigenvalues do not match vectors of shape {vecs.shape}"
            )
        if np.any(vals <= 0.0):
            raise NotPositiveSemidefinite("spectral data keeps strictly positive eigenvalues only")
        object.__setattr__(self, "eigenvalues", frozen(vals))
        object.__setattr__(self, "vectors", frozen(vecs))
        object.__setattr__(self, "sigma", frozen(np.diag(np.sqrt(vals)).astype(np.complex128)))

    @property
    def rank(self) -> int:
        return int(self.eigenvalues.size)

    @property
    def sigma_squared(self) -> np.ndarray:
        return np.diag(self.eigenvalues).astype(np.complex128)


def _full_eid(m: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray]:
    """Validated, canonically ordered and phased EID (no truncation)."""
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"eigendecomposition needs a square matrix, got {m.shape}")
    norm = frobenius(m)
    skew = frobenius(m - m.conj().T)
    if skew > threshold(tol, norm):
        raise NotHermitian(f"||m - m*||_F = {skew:.3e} exceeds tolerance")
    values, vectors = _jacobi(0.5 * (m + m.conj().T))
    vectors, _, pivots = fix_phases(vectors)
    cutoff = tol * max(float(values.max(initial=0.0)), 1.0)
    order = _canonical_order(values, pivots, cutoff)
    return values[order], vectors[:, order]


def hermitian_eid(m, tol: float = DEFAULT_TOL) -> SpectralData:
    """Eigendecomposition of a Hermitian positive semidefinite matrix.

    Only eigenpairs above the rank cutoff (see :func:`numeric_rank`) are kept.

    Raises
    ------
    NotHermitian
        If ``||m - m*||_F`` exceeds ``tol * ||m||_F``.
    NotPositiveSemidefinite
        If an eigenvalue falls below ``-tol * max(lambda_max, 1)``.
    """
    m = as_cmatrix(m)
    values, vectors = _full_eid(m, tol)
    cutoff = tol * max(float(values.max(initial=0.0)), 1.0)
    if values.size and values.min() < -cutoff:
        raise NotPositiveSemidefinite(f"eigenvalue {values.min():.3e} is negative")
    r = numeric_rank(values, tol)
    return SpectralData(values[:r], vectors[:, :r])


def svd(m, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin SVD ``m = u @ sigma @ v*`` restricted to the numerical rank.

    The Gram matrix of the smaller side is diagonalised with
    :func:`hermitian_eid`, so the rank cutoff applies to the squared
    singular values, exactly as for ``m @ m*``.

    Returns
    -------
    u : ndarray, shape (n, r)
    sigma : ndarray, shape (r, r)
        Real diagonal, descending.
    v : ndarray, shape (k, r)
    """
    m = as_cmatrix(m)
    n, k = m.shape
    if k <= n:
        spec = hermitian_eid(m.conj().T @ m, tol)
        s = np.sqrt(spec.eigenvalues)
        v = np.array(spec.vectors)
        u = (m @ v) / s
    else:
        spec = hermitian_eid(m @ m.conj().T, tol)
        s = np.sqrt(spec.eigenvalues)
        u = np.array(spec.vectors)
        v = (m.conj().T @ u) / s
    u, phases, _ = fix_phases(u)
    v = v * phases
    return u, np.diag(s).astype(np.complex128), v


def matrix_rank(m, tol: float = DEFAULT_TOL) -> int:
    return svd(m, tol)[1].shape[0]


def qr_orthonormal_rows(m, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Orthonormalise the rows of a k x p matrix (k <= p).

    Modified Gram-Schmidt with one reorthogonalisation pass. Writing
    ``m = L @ R``, the triangular ``L`` has a real positive diagonal, which
    is what makes Gaussian inputs map to Haar-distributed rows.

    Raises
    ------
    RankDeficient
        If a row is (numerically) in the span of the previous ones.
    """
    m = as_cmatrix(m)
    k, p = m.shape
    if k > p:
        raise RankDeficient(f"{k} rows cannot be orthonormal in C^{p}")
    rows = m.copy()
    for i in range(k):
        original = frobenius(rows[i])
        for _ in range(2):
            for j in range(i):
                rows[i] -= np.vdot(rows[j], rows[i]) * rows[j]
        norm = frobenius(rows[i])
        if norm <= threshold(tol, max(original, 1.0)):
            raise RankDeficient(f"row {i} is linearly dependent on rows 0..{i - 1}")
        rows[i] /= norm
    return rows
