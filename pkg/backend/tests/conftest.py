"""Shared fixtures"""

import numpy as np
import pytest

from app.models import QubitPrep


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def random_prep(rng):
    """Factory for Haar-random single-qubit preparations."""

    def make() -> QubitPrep:
        return QubitPrep.random(rng)

    return make
