"""
Ensembles, density operators and density factors.

An ensemble ``{p_i, |psi_i>}`` of normalised states defines

    rho = sum_i p_i |psi_i><psi_i| = Psi Psi*

where the density factor ``Psi`` stacks the unnormalised states
``sqrt(p_i) |psi_i>`` as columns.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidDimensions,
    InvalidEnsemble,
    NotUnitTrace,
)
from .linalg_core import (
    DEFAULT_TOL,
    as_cmatrix,
    frobenius,
    frozen,
    hermitian_eid,
    threshold,
)


@dataclass(frozen=True)
class Ensemble:
    """Normalised states (columns of ``states``, shape n x k) with probabilities."""

    states: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        states = as_cmatrix(self.states, "states")
        probs = np.array(self.probs, dtype=float).reshape(-1)
        if probs.size == 0 or states.shape[1] == 0:
            raise InvalidEnsemble("an ensemble needs at least one state")
        if probs.size != states.shape[1]:
            raise DimensionMismatch(
                f"{probs.size} probabilities for {states.shape[1]} states"
            )
        if not np.all(np.isfinite(probs)):
            raise InvalidEnsemble("probabilities must be finite")
        object.__setattr__(self, "states", frozen(states))
        object.__setattr__(self, "probs", frozen(probs))

    @classmethod
    def from_states(cls, states, probs) -> "Ensemble":
        """Build from a sequence of k state vectors (each of length n)."""
        return cls(np.column_stack([np.asarray(s, dtype=np.complex128) for s in states]), probs)

    @property
    def dim(self) -> int:
        return self.states.shape[0]

    @property
    def size(self) -> int:
        return self.states.shape[1]

    def validate(self, tol: float = DEFAULT_TOL) -> "Ensemble":
        """Check unit-norm states and a probability distribution; return self."""
        for i in range(self.size):
            if self.probs[i] < -tol:
                raise InvalidEnsemble(f"probability {i} is negative ({self.probs[i]!r})", i)
            norm = frobenius(self.states[:, i])
            if abs(norm - 1.0) > threshold(tol):
                raise InvalidEnsemble(f"state {i} has norm {norm!r}, expected 1", i)
        total = float(self.probs.sum())
        if abs(total - 1.0) > threshold(tol):
            raise InvalidEnsemble(f"probabilities sum to {total!r}, expected 1")
        return self


@dataclass(frozen=True)
class DensityOperator:
    """An n x n Hermitian, positive semidefinite, unit-trace matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        m = as_cmatrix(self.matrix, "density matrix")
        if m.shape[0] != m.shape[1]:
            raise InvalidDimensions(f"density matrix must be square, got {m.shape}")
        object.__setattr__(self, "matrix", frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def validate(self, tol: float = DEFAULT_TOL) -> "DensityOperator":
        # hermitian_eid raises NotHermitian / NotPositiveSemidefinite
        hermitian_eid(self.matrix, tol)
        tr = complex(np.trace(self.matrix))
        if abs(tr - 1.0) > threshold(tol):
            raise NotUnitTrace(f"trace is {tr!r}, expected 1")
        return self


@dataclass(frozen=True)
class DensityFactor:
    """An n x k matrix whose columns are unnormalised states."""

    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", frozen(as_cmatrix(self.matrix, "density factor")))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def size(self) -> int:
        return self.matrix.shape[1]

    def validate(self, tol: float = DEFAULT_TOL) -> "DensityFactor":
        weight = frobenius(self.matrix) ** 2
        if abs(weight - 1.0) > threshold(tol):
            raise NotUnitTrace(f"||Psi||_F^2 = {weight!r}, expected 1")
        return self


def density_from_ensemble(e: Ensemble, tol: float = DEFAULT_TOL) -> DensityOperator:
    """rho = sum_i p_i |psi_i><psi_i|."""
    e.validate(tol)
    rho = (e.states * e.probs) @ e.states.conj().T
    return DensityOperator(rho)


def factor_from_ensemble(e: Ensemble, tol: float = DEFAULT_TOL) -> DensityFactor:
    """Stack the columns ``sqrt(p_i) |psi_i>``."""
    e.validate(tol)
    return DensityFactor(e.states * np.sqrt(np.clip(e.probs, 0.0, None)))


def density_from_factor(f: DensityFactor, tol: float = DEFAULT_TOL) -> DensityOperator:
    """rho = Psi Psi*. Raises NotUnitTrace if ||Psi||_F^2 differs from one."""
    f.validate(tol)
    return DensityOperator(f.matrix @ f.matrix.conj().T)


def gram(f: DensityFactor) -> np.ndarray:
    """The k x k matrix Psi* Psi; its diagonal holds the probabilities."""
    return f.matrix.conj().T @ f.matrix


def is_orthonormal_factor(f: DensityFactor, tol: float = DEFAULT_TOL) -> bool:
    g = gram(f)
    off = g - np.diag(g.diagonal())
    return bool(np.all(np.abs(off) <= tol))


def ensemble_from_factor(
    f: DensityFactor, tol: float = DEFAULT_TOL
) -> tuple[Ensemble, tuple[int, ...]]:
    """Split a factor back into probabilities and normalised states.

    Columns whose squared norm is at most ``tol`` carry no weight and are
    dropped; their indices are returned alongside the ensemble. The
    probabilities are not renormalised.

    Raises
    ------
    NotUnitTrace
        If the squared column norms do not sum to one within ``tol``.
    """
    probs = np.sum(np.abs(f.matrix) ** 2, axis=0)
    total = float(probs.sum())
    if abs(total - 1.0) > threshold(tol):
        raise NotUnitTrace(f"column weights sum to {total!r}, expected 1")
    keep = [i for i in range(f.size) if probs[i] > tol]
    dropped = tuple(i for i in range(f.size) if probs[i] <= tol)
    states = f.matrix[:, keep] / np.sqrt(probs[keep])
    return Ensemble(states, probs[keep]), dropped


def rank_of(d: DensityOperator, tol: float = DEFAULT_TOL) -> int:
    return hermitian_eid(d.matrix, tol).rank


def random_ensemble(n: int, k: int, seed=None) -> Ensemble:
    """Random ensemble: Gaussian states, flat-Dirichlet probabilities."""
    if n < 1 or k < 1:
        raise InvalidDimensions(f"need n >= 1 and k >= 1, got n={n}, k={k}")
    rng = np.random.default_rng(seed)
    states = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    states /= np.linalg.norm(states, axis=0)
    probs = rng.dirichlet(np.ones(k))
    return Ensemble(states, probs)
