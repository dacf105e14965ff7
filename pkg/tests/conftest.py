import numpy as np
import pytest

from weibull_estlab import SortedSample, lifetime48


@pytest.fixture(scope="session")
def lifetime_dataset():
    return lifetime48()


@pytest.fixture(scope="session")
def lifetime_sample(lifetime_dataset):
    return SortedSample.from_data(lifetime_dataset.observations)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_positive_sample(rng, n=None):
    """A generic positive sample: lognormal-ish spread, occasionally Weibull."""
    if n is None:
        n = int(rng.integers(2, 120))
    kind = rng.integers(0, 3)
    if kind == 0:
        return np.exp(rng.normal(0.0, rng.uniform(0.2, 1.5), n))
    if kind == 1:
        shape = rng.uniform(0.4, 6.0)
        scale = rng.uniform(0.2, 20.0)
        return scale * rng.weibull(shape, n)[:] + 1e-12
    return rng.uniform(0.1, 50.0, n)
