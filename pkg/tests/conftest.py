import numpy as np
import pytest
from hypothesis import HealthCheck, settings

import varform as vf

settings.register_profile(
    "suite",
    max_examples=30,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240816)


def make_dataset(rng: np.random.Generator, n: int, p: int) -> vf.Dataset:
    """Generic heteroscedastic dataset for unit tests."""
    x = rng.standard_normal((n, p))
    y = x.sum(axis=1) + (1.0 + 0.5 * np.abs(x[:, 0])) * rng.standard_normal(n)
    return vf.Dataset(y=y, x=x)
