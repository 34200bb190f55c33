"""Worked-example matrices and the independent oracles used to check them."""

import numpy as np

S2, S3, S6 = np.sqrt(2), np.sqrt(3), np.sqrt(6)

# Example 1: three normalised states in C^4
STATES = [
    np.array([1, -1j, -1, 1j]) / 2,
    np.array([2 + S2, -2j + S2, -2 + S2, 2j + S2]) / (2 * S6),
    np.array([2 - S2, -2j - S2, -2 - S2, 2j - S2]) / (2 * S6),
]
PROBS = [1 / 4, 3 / 8, 3 / 8]

RHO = np.array(
    [
        [4, 1 + 3j, -2, 1 - 3j],
        [1 - 3j, 4, 1 + 3j, -2],
        [-2, 1 - 3j, 4, 1 + 3j],
        [1 + 3j, -2, 1 - 3j, 4],
    ]
) / 16

# Eq. (4) as printed
PSI = np.array(
    [
        [1, 1 + 1 / S2, 1 - 1 / S2],
        [-1j, -1j + 1 / S2, -1j - 1 / S2],
        [-1, -1 + 1 / S2, -1 - 1 / S2],
        [1j, 1j + 1 / S2, 1j - 1 / S2],
    ]
) / 4

# Psi* Psi as printed after Eq. (4)
GRAM_PRINTED = np.array([[1 / 4, -1 / 4, -1 / 4], [-1 / 4, 3 / 8, 1 / 8], [-1 / 4, 1 / 8, 3 / 8]])

# Example 3 printed right singular vectors
V_PRINTED = np.array([[S2, 0], [S2, S3], [-S2, S3]]) / S6

# Example 4 printed co-isometry A0
A0_PRINTED = np.array([[0, S3, -S3], [-S2, S2, S2]]) / S6

# Example 4 printed 3 x 8 DFT co-isometry
_E = lambda angle: np.exp(1j * angle)  # noqa: E731
A_DFT_PRINTED = np.array(
    [
        [1, 1, 1, 1, 1, 1, 1, 1],
        [1, _E(-np.pi / 4), -1j, _E(-3 * np.pi / 4), -1, _E(3 * np.pi / 4), 1j, _E(np.pi / 4)],
        [1, -1j, -1, 1j, 1, -1j, -1, 1j],
    ]
) / (2 * S2)


def naive_matmul(a, b):
    a, b = np.asarray(a), np.asarray(b)
    out = np.zeros((a.shape[0], b.shape[1]), dtype=complex)
    for i in range(a.shape[0]):
        for j in range(b.shape[1]):
            acc = 0j
            for t in range(a.shape[1]):
                acc += a[i, t] * b[t, j]
            out[i, j] = acc
    return out


def circulant_spectrum(first_row):
    """Eigenpairs of a circulant matrix from its first row, via the DFT.

    A circulant matrix with first row c has eigenvectors
    f_j = (w^(j m))_m / sqrt(n), w = exp(2 pi i / n), with eigenvalues
    sum_m c_m w^(j m).
    """
    c = np.asarray(first_row)
    n = c.size
    w = np.exp(2j * np.pi / n)
    pairs = []
    for j in range(n):
        f = w ** (j * np.arange(n)) / np.sqrt(n)
        lam = sum(c[m] * w ** (j * m) for m in range(n))
        pairs.append((lam, f))
    return pairs


def oracle_projectors(first_row, cutoff=1e-12):
    """{eigenvalue: projector} for the positive eigenvalues of a circulant matrix."""
    groups = {}
    for lam, f in circulant_spectrum(first_row):
        if lam.real > cutoff:
            key = round(lam.real, 12)
            groups[key] = groups.get(key, 0) + np.outer(f, f.conj())
    return groups


def projector(cols):
    cols = np.asarray(cols)
    return cols @ cols.conj().T


def corrected_psi0():
    """Minimum orthonormal factor of Example 1's rho from the circulant oracle.

    Columns sqrt(lambda) f_j for the eigenvalues 3/4 and 1/4, with the first
    (largest-modulus, lowest-row) entry real and positive.
    """
    cols = {}
    for lam, f in circulant_spectrum(RHO[0]):
        if lam.real > 1e-12:
            cols[round(lam.real, 12)] = np.sqrt(lam.real) * f * (abs(f[0]) / f[0])
    return np.column_stack([cols[k] for k in sorted(cols, reverse=True)])


def random_hermitian_psd(n, rank, rng):
    x = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    return x @ x.conj().T
