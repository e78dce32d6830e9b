import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

PARAMS = [(0.0, 1.0), (1.0, 1.0), (-2.0, 0.7)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)
