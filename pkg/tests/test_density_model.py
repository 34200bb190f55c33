import numpy as np
import pytest

from densfact.density_model import (
    DensityFactor,
    DensityOperator,
    Ensemble,
    density_from_ensemble,
    density_from_factor,
    ensemble_from_factor,
    factor_from_ensemble,
    gram,
    is_orthonormal_factor,
    random_ensemble,
    rank_of,
)
from densfact.errors import InvalidEnsemble, NotUnitTrace
from densfact.linalg_core import matrix_rank
from worked_examples import PROBS, PSI, RHO, STATES, corrected_psi0, projector


@pytest.fixture
def example1():
    return Ensemble.from_states(STATES, PROBS)


def test_example1_density(example1):
    rho = density_from_ensemble(example1)
    np.testing.assert_allclose(rho.matrix, RHO, rtol=0, atol=1e-12)


def test_maximally_mixed_qubit():
    rho = density_from_ensemble(Ensemble.from_states([[1, 0], [0, 1]], [0.5, 0.5]))
    np.testing.assert_array_equal(rho.matrix, np.eye(2) / 2)


def test_pure_state_is_projector():
    psi = np.array([1, 1j]) / np.sqrt(2)
    rho = density_from_ensemble(Ensemble.from_states([psi], [1.0]))
    np.testing.assert_allclose(rho.matrix, np.outer(psi, psi.conj()), atol=1e-15)
    assert rank_of(rho) == 1


@pytest.mark.parametrize(
    "states, probs, index",
    [
        ([[1, 0], [1, 1]], [0.5, 0.5], 1),
        ([[1, 0], [0, 1]], [1.2, -0.2], 1),
        ([[1, 0], [0, 1]], [0.5, 0.4], None),
    ],
)
def test_invalid_ensemble_reports_index(states, probs, index):
    with pytest.raises(InvalidEnsemble) as info:
        density_from_ensemble(Ensemble.from_states(states, probs))
    assert info.value.index == index


def test_factor_from_ensemble_is_eq4(example1):
    np.testing.assert_allclose(factor_from_ensemble(example1).matrix, PSI, rtol=0, atol=1e-15)


def test_factor_of_pure_state():
    psi = np.array([0.6, 0.8j])
    f = factor_from_ensemble(Ensemble.from_states([psi], [1.0]))
    np.testing.assert_array_equal(f.matrix, psi.reshape(2, 1))


def test_zero_probability_gives_zero_column():
    e = Ensemble.from_states([[1, 0], [0, 1]], [1.0, 0.0])
    f = factor_from_ensemble(e)
    np.testing.assert_array_equal(f.matrix[:, 1], [0, 0])


def test_density_from_factor_examples():
    np.testing.assert_allclose(density_from_factor(DensityFactor(PSI)).matrix, RHO, atol=1e-15)
    col = np.array([[0.0], [1.0]])
    np.testing.assert_array_equal(density_from_factor(DensityFactor(col)).matrix, [[0, 0], [0, 1]])


def test_density_from_corrected_psi0_matches_ensemble_oracle(example1):
    oracle = density_from_ensemble(example1).matrix
    np.testing.assert_allclose(
        density_from_factor(DensityFactor(corrected_psi0())).matrix, oracle, atol=1e-15
    )


def test_density_from_factor_rejects_non_unit_trace():
    with pytest.raises(NotUnitTrace):
        density_from_factor(DensityFactor(np.eye(2)))


def test_gram_of_eq4_from_its_own_columns():
    # entry (i, j) is <psi_i|psi_j>, computed column by column
    cols = PSI.T
    oracle = np.array([[np.vdot(a, b) for b in cols] for a in cols])
    np.testing.assert_allclose(gram(DensityFactor(PSI)), oracle, atol=1e-15)
    np.testing.assert_allclose(
        oracle, [[1 / 4, 1 / 4, 1 / 4], [1 / 4, 3 / 8, 1 / 8], [1 / 4, 1 / 8, 3 / 8]], atol=1e-15
    )


def test_gram_diagonal_is_probabilities():
    np.testing.assert_allclose(gram(DensityFactor(PSI)).diagonal(), PROBS, atol=1e-15)


def test_gram_of_minimum_factor():
    np.testing.assert_allclose(gram(DensityFactor(corrected_psi0())), np.diag([3 / 4, 1 / 4]), atol=1e-15)


def test_orthonormality_checks():
    assert not is_orthonormal_factor(DensityFactor(PSI))
    assert is_orthonormal_factor(DensityFactor(corrected_psi0()))
    assert is_orthonormal_factor(DensityFactor([[0.6], [0.8]]))
    assert is_orthonormal_factor(DensityFactor(np.eye(2) / np.sqrt(2)))


def test_ensemble_from_eq4():
    e, dropped = ensemble_from_factor(DensityFactor(PSI))
    assert dropped == ()
    np.testing.assert_allclose(e.probs, PROBS, atol=1e-15)
    for got, want in zip(e.states.T, STATES):
        np.testing.assert_allclose(np.outer(got, got.conj()), np.outer(want, want.conj()), atol=1e-15)


def test_ensemble_from_minimum_factor():
    e, _ = ensemble_from_factor(DensityFactor(corrected_psi0()))
    np.testing.assert_allclose(e.probs, [3 / 4, 1 / 4], atol=1e-15)


def test_ensemble_from_factor_drops_zero_column():
    f = DensityFactor(np.array([[0.6, 0, 0], [0, 0, 0.8]]))
    e, dropped = ensemble_from_factor(f)
    assert dropped == (1,)
    assert e.size == 2
    assert e.probs.sum() == pytest.approx(1.0, abs=1e-15)


def test_ensemble_from_factor_rejects_bad_weight():
    with pytest.raises(NotUnitTrace):
        ensemble_from_factor(DensityFactor(np.eye(2)))


def test_rank_of():
    assert rank_of(DensityOperator(RHO)) == 2
    assert rank_of(DensityOperator(np.eye(5) / 5)) == 5


def test_density_operator_validate():
    DensityOperator(RHO).validate()
    with pytest.raises(NotUnitTrace):
        DensityOperator(np.eye(2)).validate()


def test_values_are_immutable():
    f = DensityFactor(PSI)
    with pytest.raises(ValueError):
        f.matrix[0, 0] = 1.0


# -- properties over random ensembles -------------------------------------


def _random_cases(count):
    for seed in range(count):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 9))
        k = int(rng.integers(1, 13))
        yield random_ensemble(n, k, rng)


@pytest.mark.parametrize("e", list(_random_cases(200)))
def test_round_trip_and_trace(e):
    f = factor_from_ensemble(e)
    rho = density_from_ensemble(e)
    np.testing.assert_allclose(density_from_factor(f).matrix, rho.matrix, rtol=0, atol=1e-12)
    assert np.trace(gram(f)).real == pytest.approx(1.0, abs=1e-10)
    assert np.trace(rho.matrix).real == pytest.approx(1.0, abs=1e-10)
    assert matrix_rank(f.matrix) == rank_of(rho)


@pytest.mark.parametrize("e", list(_random_cases(100)))
def test_ensemble_round_trip_up_to_phase(e):
    back, dropped = ensemble_from_factor(factor_from_ensemble(e))
    assert dropped == ()
    np.testing.assert_allclose(back.probs, e.probs, atol=1e-14)
    for got, want in zip(back.states.T, e.states.T):
        np.testing.assert_allclose(projector(got[:, None]), projector(want[:, None]), atol=1e-13)


@pytest.mark.parametrize("seed", range(50))
def test_orthonormal_factor_is_minimum(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 9))
    k = int(rng.integers(1, n + 1))
    q, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    probs = rng.dirichlet(np.ones(k))
    f = DensityFactor(q[:, :k] * np.sqrt(probs))
    assert is_orthonormal_factor(f)
    assert f.size == rank_of(density_from_factor(f))
