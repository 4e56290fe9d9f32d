import math

import numpy as np
import pytest

from models.operators import HermitianOperator
from services.errors import (
    BudgetExceededError,
    DimensionMismatchError,
    InvalidOperatorError,
    LabelMismatchError,
)
from services.operator_core import (
    apply_test,
    as_density,
    as_test,
    binary_distribution,
    classical_state,
    classical_tensor_power,
    density_matrix,
    diagonal_classical,
    hermitian,
    mat_power,
    pinch,
    post_test_distribution,
    random_density,
    sequence_log_probs,
    spectral,
    support_projection,
    tensor_power,
    tensor_power_classical,
    trace_distance,
    type_table,
)
from config import settings


def test_hermitian_rejects_non_hermitian_matrix():
    with pytest.raises(InvalidOperatorError):
        hermitian([[1.0, 1.0], [0.0, 1.0]])


def test_hermitian_symmetrizes_small_asymmetry():
    op = hermitian([[1.0, 1e-12], [0.0, 1.0]])
    assert np.allclose(op.entries, op.entries.conj().T, atol=0)


def test_spectral_reconstructs_operator(rng):
    rho = random_density(4, rng)
    evals, evecs = spectral(rho)
    assert np.all(np.diff(evals) >= 0)
    assert np.allclose(evecs.conj().T @ evecs, np.eye(4), atol=1e-10)
    assert np.allclose((evecs * evals) @ evecs.conj().T, rho.entries, atol=1e-9)


@pytest.mark.parametrize(
    "matrix",
    [
        [[1.2, 0.0], [0.0, -0.2]],
        [[0.6, 0.0], [0.0, 0.6]],
    ],
)
def test_density_matrix_rejects_invalid_states(matrix):
    with pytest.raises(InvalidOperatorError):
        density_matrix(matrix)


def test_density_matrix_clamps_tiny_negative_eigenvalues():
    rho = density_matrix([[1.0 + 1e-11, 0.0], [0.0, -1e-11]])
    assert rho.spectrum[0][0] >= 0
    assert np.real(np.trace(rho.entries)) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("tiny", [1e-13, 1e-15])
def test_density_matrix_clamps_negative_eigenvalues_below_support_tolerance(tiny):
    rho = density_matrix([[1.0 + tiny, 0.0], [0.0, -tiny]])
    evals = rho.spectrum[0]
    assert evals[0] == 0.0
    assert evals[1] == pytest.approx(1.0, abs=1e-15)


def test_as_test_rejects_out_of_range_eigenvalues():
    with pytest.raises(InvalidOperatorError):
        as_test([[1.5, 0.0], [0.0, 0.0]])


@pytest.mark.parametrize("x", [-1.0, 0.3, 2.0])
def test_mat_power_of_pure_state_is_the_state(x):
    v = np.array([1.0, 1.0j]) / math.sqrt(2)
    rho = density_matrix(np.outer(v, v.conj()))
    assert np.allclose(mat_power(rho, x).entries, rho.entries, atol=1e-10)


def test_mat_power_zero_is_support_projection(rng):
    rho = random_density(3, rng, rank=2)
    p = support_projection(rho).entries
    assert np.allclose(p @ p, p, atol=1e-10)
    assert np.real(np.trace(p)) == pytest.approx(2.0, abs=1e-10)
    assert np.allclose(mat_power(rho, 0.0).entries, p)


def test_mat_power_additivity(rng):
    rho = random_density(3, rng)
    lhs = mat_power(rho, 0.4).entries @ mat_power(rho, 0.7).entries
    assert np.allclose(lhs, mat_power(rho, 1.1).entries, atol=1e-10)


def test_apply_test_sums_to_trace(rng):
    rho = random_density(3, rng)
    t = as_test(np.diag([1.0, 0.5, 0.0]))
    accept, reject = apply_test(rho, t)
    assert 0 <= accept <= 1
    assert accept + reject == pytest.approx(1.0, abs=1e-12)


def test_post_test_distribution_matches_acceptance_mass(rng):
    rho = random_density(3, rng)
    t = as_test(np.diag([1.0, 0.5, 0.0]))
    dist = post_test_distribution(rho, t)
    accept, reject = apply_test(rho, t)
    assert dist.p == pytest.approx(accept, abs=1e-15)
    assert dist.complement == pytest.approx(reject, abs=1e-12)


def test_apply_test_dimension_mismatch(rng):
    with pytest.raises(DimensionMismatchError):
        apply_test(random_density(3, rng), as_test(np.eye(2)))


def test_classical_state_defaults_and_validation():
    p = classical_state([0.25, 0.75])
    assert p.labels == ("1", "2")
    with pytest.raises(InvalidOperatorError):
        classical_state([0.5, 0.6])
    with pytest.raises(InvalidOperatorError):
        classical_state([0.5, 0.5], labels=["x", "x"])


def test_binary_distribution_clamps_rounding():
    assert binary_distribution(1 + 1e-15).p == 1.0
    with pytest.raises(InvalidOperatorError):
        binary_distribution(1.1)


def test_type_table_mass_and_count():
    p = classical_state([0.2, 0.3, 0.5])
    counts, log_mult = type_table(4, 3)
    assert counts.shape == (15, 3)
    assert np.all(counts.sum(axis=1) == 4)
    total = np.exp(log_mult + sequence_log_probs(counts, p.weights)).sum()
    assert total == pytest.approx(1.0, abs=1e-12)


def test_type_table_budget(monkeypatch):
    monkeypatch.setattr(settings, "type_budget", 10)
    with pytest.raises(BudgetExceededError) as exc:
        type_table(4, 3)
    assert exc.value.count == 15
    assert exc.value.budget == 10


def test_sequence_log_probs_blocks_zero_mass_symbols():
    counts = np.array([[2, 0], [1, 1]])
    lp = sequence_log_probs(counts, np.array([1.0, 0.0]))
    assert lp[0] == 0.0
    assert lp[1] == -math.inf


def test_tensor_power_classical_multiplicities():
    p = classical_state([0.5, 0.5])
    decomposition = tensor_power_classical(p, 3)
    assert decomposition.total_multiplicity == 8
    assert sorted(t.multiplicity for t in decomposition.types) == [1, 1, 3, 3]


def test_classical_tensor_power_labels_and_weights():
    p = classical_state([0.25, 0.75], labels=["a", "b"])
    p2 = classical_tensor_power(p, 2)
    assert p2.labels == ("a,a", "a,b", "b,a", "b,b")
    assert np.allclose(p2.weights, [0.0625, 0.1875, 0.1875, 0.5625])


def test_tensor_power_matches_kron_and_budget(rng, monkeypatch):
    rho = random_density(2, rng)
    assert np.allclose(tensor_power(rho, 2).entries, np.kron(rho.entries, rho.entries))
    monkeypatch.setattr(settings, "dense_budget", 4)
    with pytest.raises(BudgetExceededError):
        tensor_power(rho, 3)


def test_diagonal_round_trip_and_rejection(rng):
    p = classical_state([0.1, 0.2, 0.7])
    assert np.allclose(diagonal_classical(as_density(p)).weights, p.weights)
    with pytest.raises(InvalidOperatorError):
        diagonal_classical(random_density(2, rng))


def test_pinch_is_diagonal_in_basis(rng):
    rho = random_density(3, rng)
    basis = random_density(3, rng).spectrum[1]
    pinched = pinch(rho, basis).entries
    in_basis = basis.conj().T @ pinched @ basis
    assert np.allclose(in_basis, np.diag(np.diag(in_basis)), atol=1e-10)


def test_trace_distance_bounds(rng):
    rho, sigma = random_density(3, rng), random_density(3, rng)
    assert trace_distance(rho, rho) == pytest.approx(0.0, abs=1e-12)
    assert 0 < trace_distance(rho, sigma) <= 1


def test_operator_models_are_frozen():
    op = HermitianOperator(entries=np.eye(2, dtype=complex))
    with pytest.raises(Exception):
        op.entries = np.zeros((2, 2))


def test_label_mismatch_is_reported():
    from services.operator_core import check_same_labels

    with pytest.raises(LabelMismatchError):
        check_same_labels(classical_state([1.0], ["a"]), classical_state([1.0], ["b"]))
