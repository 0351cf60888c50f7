"""Shared test configuration.

Property-based tests use hypothesis with the deadline disabled: several
estimators run an iterative solver whose wall time varies too much per example
for hypothesis's default per-example timing to be meaningful.
"""

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "momest",
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("momest")


@pytest.fixture
def rng():
    """Fresh deterministic generator per test."""
    return np.random.default_rng(0xC0FFEE)
