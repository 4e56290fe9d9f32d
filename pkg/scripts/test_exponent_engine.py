import math

import numpy as np
import pytest

from models.results import Method
from services.divergence_core import build_psi, psi_at, relative_entropy_value, standard_renyi
from services.errors import InvalidParameterError
from services.exponent_engine import (
    chernoff,
    d0_regime_threshold,
    d_zero_value,
    hoeffding,
    hoeffding_test,
    legendre_phi,
    legendre_phi_plus,
    nagaoka_objective,
    regularized_test,
    salzmann_datta_finite_n,
)
from services.operator_core import as_density, classical_state, classical_tensor_power, random_density

ALPHAS = [0.1, 0.3, 0.5, 0.7, 0.9]


def test_chernoff_is_zero_for_identical_states(identical_state):
    assert chernoff(build_psi(identical_state, identical_state)) == 0.0


def test_chernoff_fixed_point(two_level_pair, noncommuting_pair):
    for pair in (two_level_pair, noncommuting_pair):
        profile = build_psi(*pair)
        c = chernoff(profile)
        assert c > 0
        assert hoeffding(profile, c).H == pytest.approx(c, abs=1e-7)


def test_legendre_phi_plus_offsets_phi(two_level_pair):
    profile = build_psi(*two_level_pair)
    assert legendre_phi_plus(profile, 0.1) == pytest.approx(legendre_phi(profile, 0.1) + 0.1)
    # phi(0) = -min psi = C
    assert legendre_phi(profile, 0.0) == pytest.approx(chernoff(profile), abs=1e-9)


def test_hoeffding_boundaries(two_level_pair):
    profile = build_psi(*two_level_pair)
    relative = relative_entropy_value(profile)
    assert hoeffding(profile, relative + 0.1).H == 0.0
    at_d0 = hoeffding(profile, d_zero_value(profile))
    assert at_d0.boundary == "u->-inf"
    assert hoeffding(profile, -0.5).H == math.inf


def test_hoeffding_decreasing(generic_pair):
    profile = build_psi(*generic_pair)
    relative = relative_entropy_value(profile)
    values = [hoeffding(profile, r).H for r in np.linspace(0.0, relative, 15)]
    assert all(a >= b - 1e-10 for a, b in zip(values, values[1:]))


def test_regularized_identical_and_orthogonal(identical_state):
    assert regularized_test(identical_state, identical_state, 0.4).value == 0.0
    p, q = classical_state([1.0, 0.0]), classical_state([0.0, 1.0])
    result = regularized_test(p, q, 0.4)
    assert result.value == math.inf
    assert result.shortcut == "orthogonal"


@pytest.mark.parametrize("alpha", ALPHAS)
def test_methods_agree_and_sit_in_sandwich(generic_pair, alpha):
    p, q = generic_pair
    root = regularized_test(p, q, alpha, Method.HOEFFDING_ROOT)
    sup = regularized_test(p, q, alpha, Method.SALZMANN_DATTA)
    assert root.value == pytest.approx(sup.value, abs=1e-6)
    d_alpha = standard_renyi(p, q, alpha).value
    assert d_alpha / 2 - 1e-8 <= root.value < d_alpha - 1e-6


def test_chernoff_equals_regularized_at_half(two_level_pair, noncommuting_pair):
    for pair in (two_level_pair, noncommuting_pair):
        assert regularized_test(*pair, 0.5).value == pytest.approx(chernoff(build_psi(*pair)), abs=1e-7)


@pytest.mark.parametrize("alpha,expected", [(0.3, math.log(2)), (0.5, math.log(2)), (0.75, 3 * math.log(2))])
def test_regularized_on_pure_states(pure_pair, alpha, expected):
    assert regularized_test(*pure_pair, alpha).value == pytest.approx(expected, abs=1e-7)


def test_degenerate_cases_short_circuit():
    p = classical_state([0.5, 0.5, 0.0])
    q = classical_state([0.25, 0.25, 0.5])
    case_a = regularized_test(p, q, 0.3)
    assert case_a.shortcut == "case-a"
    assert case_a.value == pytest.approx(math.log(2))
    case_b = regularized_test(q, p, 0.3)
    assert case_b.shortcut == "case-b"
    assert case_b.value == pytest.approx(standard_renyi(q, p, 0.3).value)


def test_d0_regime():
    p = classical_state([0.6, 0.4, 0.0])
    q = classical_state([0.2, 0.3, 0.5])
    profile = build_psi(p, q)
    threshold = d0_regime_threshold(profile)
    assert threshold is not None and 0 < threshold < 1
    result = regularized_test(p, q, threshold / 2, profile=profile)
    assert result.value == pytest.approx(d_zero_value(profile), abs=1e-12)
    assert result.shortcut == "d0-regime"


def test_weak_additivity(two_level_pair):
    p, q = two_level_pair
    p2, q2 = classical_tensor_power(p, 2), classical_tensor_power(q, 2)
    for alpha in (0.3, 0.7):
        assert regularized_test(p2, q2, alpha).value == pytest.approx(2 * regularized_test(p, q, alpha).value, abs=1e-7)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_regularized_skew_symmetry(noncommuting_pair, alpha):
    rho, sigma = noncommuting_pair
    lhs = (1 - alpha) * regularized_test(rho, sigma, alpha).value
    rhs = alpha * regularized_test(sigma, rho, 1 - alpha).value
    assert lhs == pytest.approx(rhs, abs=1e-7)


def test_regularized_rejects_alpha_above_one(two_level_pair):
    with pytest.raises(InvalidParameterError):
        regularized_test(*two_level_pair, 1.5)


@pytest.mark.parametrize("n", [2, 4, 8])
@pytest.mark.parametrize("r", [0.05, 0.1, 0.2])
@pytest.mark.parametrize("alpha", [0.3, 0.7])
def test_hoeffding_test_bounds_classical(two_level_pair, n, r, alpha):
    result = hoeffding_test(*two_level_pair, n, r, alpha)
    assert result.bounds_hold
    assert result.type_two_error <= math.exp(-n * r) + 1e-12


def test_hoeffding_test_identical_accepts_nothing():
    p = classical_state([0.3, 0.7])
    result = hoeffding_test(p, p, 3, 0.1, 0.5)
    assert result.accepted_types == []
    assert result.type_one_error == pytest.approx(1.0)
    assert result.type_two_error == 0.0
    assert result.bounds_hold


def test_hoeffding_test_dense_quantum(noncommuting_pair):
    result = hoeffding_test(*noncommuting_pair, 3, 0.1, 0.5)
    assert result.test is not None
    assert result.test.dim == 8
    assert result.bounds_hold


def test_hoeffding_test_rejects_bad_rate(two_level_pair):
    with pytest.raises(InvalidParameterError):
        hoeffding_test(*two_level_pair, 2, 0.0, 0.5)


def test_nagaoka_values_and_bound(two_level_pair):
    p, q = two_level_pair
    assert nagaoka_objective(p, q, 1, 0.0) == pytest.approx(math.log(0.75))
    bound = -legendre_phi(build_psi(p, q), 0.0)
    values = [nagaoka_objective(p, q, n, 0.0) for n in range(1, 9)]
    assert all(v <= bound + 1e-9 for v in values)
    assert bound - values[-1] < 0.1


def test_nagaoka_identical_and_feasible_tests(noncommuting_pair):
    p = classical_state([0.3, 0.7])
    assert nagaoka_objective(p, p, 3, 0.0) == pytest.approx(0.0, abs=1e-12)
    rho, sigma = noncommuting_pair
    assert nagaoka_objective(rho, sigma, 2, -50.0) <= -50.0 + 1e-9


def test_nagaoka_classical_matches_dense(two_level_pair):
    p, q = two_level_pair
    dense = nagaoka_objective(random_density(2, np.random.default_rng(0)), as_density(q), 1, 0.0)
    assert dense <= 0
    assert nagaoka_objective(as_density(p), as_density(q), 2, 0.1) == pytest.approx(
        nagaoka_objective(p, q, 2, 0.1), abs=1e-12
    )


def test_salzmann_datta_finite_n_convergence(two_level_pair):
    p, q = two_level_pair
    value = salzmann_datta_finite_n(p, q, 0.3, 6)
    assert value == pytest.approx(regularized_test(p, q, 0.3).value, abs=0.05)


def test_salzmann_datta_finite_n_single_copy_scan(two_level_pair):
    p, q = two_level_pair
    alpha = 0.3
    k = alpha / (1 - alpha)
    best = 1.0
    # fractional tests on the likelihood-ratio ordering plus the four subsets
    for a in np.linspace(0, 1, 10001):
        best = min(best, (1 - a * 0.5) ** k + a * 0.25, (0.5 - a * 0.5) ** k + 0.25 + a * 0.75)
    assert salzmann_datta_finite_n(p, q, alpha, 1) == pytest.approx(-math.log(best), abs=1e-4)


@pytest.mark.parametrize("alpha,n", [(0.3, 1), (0.5, 4)])
def test_salzmann_datta_finite_n_identical_low_alpha(alpha, n):
    p = classical_state([0.3, 0.7])
    assert salzmann_datta_finite_n(p, p, alpha, n) == pytest.approx(0.0, abs=1e-12)


def test_salzmann_datta_finite_n_identical_high_alpha():
    p = classical_state([0.3, 0.7])
    alpha, n = 0.75, 2
    k = alpha / (1 - alpha)
    minimum = 1 - (1 - 1 / k) * k ** (-1 / (k - 1))
    assert salzmann_datta_finite_n(p, p, alpha, n) == pytest.approx(-math.log(minimum) / n, abs=1e-9)


def test_salzmann_datta_finite_n_needs_commuting_pair(noncommuting_pair):
    with pytest.raises(InvalidParameterError):
        salzmann_datta_finite_n(*noncommuting_pair, 0.3, 2)


def test_psi_profile_reused(two_level_pair):
    profile = build_psi(*two_level_pair)
    assert regularized_test(*two_level_pair, 0.3, profile=profile).value == pytest.approx(
        regularized_test(*two_level_pair, 0.3).value
    )
    assert psi_at(profile, 0.5) < 0
