"""Shared fixtures for the test suite."""

import numpy as np
import pytest

from src.model import NetworkSpec, init_params
from src.utils.config import TrainingConfig


@pytest.fixture
def rng():
    """Seeded generator for reproducible test data."""
    return np.random.default_rng(42)


@pytest.fixture
def tiny_spec():
    return NetworkSpec.from_preset("tiny")


@pytest.fixture
def tiny_params(tiny_spec):
    return init_params(tiny_spec, seed=3)


@pytest.fixture
def tiny_config():
    """Small window on the tiny preset with every threshold at zero (every frame stored)."""
    return TrainingConfig(preset="tiny", window_length=4, batch_size=1, iterations=1,
                          theta_rot=0.0, theta_trans=0.0, k=10.0)


@pytest.fixture
def tiny_frames(rng):
    return [rng.uniform(0.0, 1.0, size=(3, 16, 16)) for _ in range(4)]
