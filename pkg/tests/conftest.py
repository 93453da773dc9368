import numpy as np
import pytest

from hadprox.kernels import warmup
from hadprox.manifold import (
    Euclidean,
    Hyperboloid,
    SymmetricPositiveDefinite,
    product_manifold,
)


@pytest.fixture(scope="session", autouse=True)
def backend():
    # compile the kernels once so JIT time never leaks into a timed test
    return warmup()


@pytest.fixture(scope="session")
def euclidean3():
    return Euclidean(3)


@pytest.fixture(scope="session")
def hyperboloid2():
    return Hyperboloid(2)


@pytest.fixture(scope="session")
def spd2():
    return SymmetricPositiveDefinite(2)


@pytest.fixture(scope="session")
def mixed_product(euclidean3, hyperboloid2, spd2):
    return product_manifold([euclidean3, hyperboloid2, spd2])


@pytest.fixture(scope="session")
def all_oracles(euclidean3, hyperboloid2, spd2, mixed_product):
    return [euclidean3, hyperboloid2, spd2, mixed_product]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
