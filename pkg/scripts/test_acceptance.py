import numpy as np
import pytest

from models.results import Method
from services.divergence_core import build_psi, standard_renyi
from services.exponent_engine import chernoff, regularized_test
from services.operator_core import random_classical, random_density

ALPHAS = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]
SEED = 42
PAIRS_PER_GROUP = 17  # 6 groups, 102 pairs


def _pairs(kind, dim):
    rng = np.random.default_rng([SEED, dim, 0 if kind == "classical" else 1])
    draw = random_classical if kind == "classical" else random_density
    return [(draw(dim, rng), draw(dim, rng)) for _ in range(PAIRS_PER_GROUP)]


GROUPS = [(kind, dim) for kind in ("classical", "quantum") for dim in (2, 3, 4)]


@pytest.mark.parametrize("kind,dim", GROUPS)
def test_seeded_pairs_chernoff_identity(kind, dim):
    for rho, sigma in _pairs(kind, dim):
        profile = build_psi(rho, sigma)
        value = regularized_test(rho, sigma, 0.5, profile=profile).value
        assert value == pytest.approx(chernoff(profile), abs=1e-6)


@pytest.mark.parametrize("kind,dim", GROUPS)
def test_seeded_pairs_methods_agree(kind, dim):
    for rho, sigma in _pairs(kind, dim):
        profile = build_psi(rho, sigma)
        for alpha in ALPHAS:
            root = regularized_test(rho, sigma, alpha, Method.HOEFFDING_ROOT, profile).value
            sup = regularized_test(rho, sigma, alpha, Method.SALZMANN_DATTA, profile).value
            assert abs(root - sup) <= 1e-6


@pytest.mark.parametrize("kind,dim", GROUPS)
def test_seeded_pairs_sandwich_bounds(kind, dim):
    for rho, sigma in _pairs(kind, dim):
        profile = build_psi(rho, sigma)
        for alpha in ALPHAS:
            d_alpha = standard_renyi(rho, sigma, alpha, profile).value
            value = regularized_test(rho, sigma, alpha, profile=profile).value
            assert d_alpha / 2 - 1e-8 <= value <= d_alpha + 1e-8
