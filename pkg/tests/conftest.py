import math

import pytest

from src.fluctuation.config import MCConfig
from src.stable.params import StableParams


@pytest.fixture
def cauchy() -> StableParams:
    # gamma = 1: f(x) = 1 / (pi (1 + x^2))
    return StableParams(1.0, 1.0 / math.pi, 1.0 / math.pi)


@pytest.fixture
def symmetric() -> StableParams:
    return StableParams(1.5, 1.0, 1.0)


@pytest.fixture
def spectrally_positive() -> StableParams:
    return StableParams(1.5, 1.0, 0.0)


@pytest.fixture
def spectrally_negative() -> StableParams:
    return StableParams(1.75, 0.0, 1.0)


@pytest.fixture
def small_mc() -> MCConfig:
    return MCConfig(n_paths=4000, n_steps=64, seed=20240229, levels=(16, 32, 64), block_paths=1000, workers=1)
