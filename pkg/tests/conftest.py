import os

import numpy as np
import pytest


@pytest.fixture
def rng():
    """Seeded generator; override the seed through KOITER_SEED."""
    return np.random.default_rng(int(os.environ.get("KOITER_SEED", "42")))
