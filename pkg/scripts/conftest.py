from pathlib import Path

import numpy as np
import pytest

from services.state_io import read_state

FIXTURES = Path(__file__).resolve().parent.parent / "Data" / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


def _load(name: str):
    return read_state(FIXTURES / f"{name}.json")


@pytest.fixture
def two_level_pair():
    return _load("classical_two_level_p"), _load("classical_two_level_q")


@pytest.fixture
def generic_pair():
    return _load("classical_generic_p"), _load("classical_generic_q")


@pytest.fixture
def pure_pair():
    return _load("pure_overlap_half_a"), _load("pure_overlap_half_b")


@pytest.fixture
def noncommuting_pair():
    return _load("noncommuting_a"), _load("noncommuting_b")


@pytest.fixture
def identical_state():
    return _load("identical")


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(42)
