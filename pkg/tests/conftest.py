import numpy as np
import pytest

from fixedscat.grid import make_grid
from fixedscat.potential import bump_potential, piecewise_smooth_potential, zero_potential


@pytest.fixture(scope="session")
def dom17():
    return make_grid(1.0, 17)


@pytest.fixture(scope="session")
def dom33():
    return make_grid(1.0, 33)


@pytest.fixture(scope="session")
def bump17(dom17):
    return bump_potential(dom17, 0.1, 0.8)


@pytest.fixture(scope="session")
def bump33(dom33):
    return bump_potential(dom33, 0.1, 0.8)


@pytest.fixture(scope="session")
def poly33(dom33):
    return piecewise_smooth_potential(dom33, 0.1, 0.8, 4)


@pytest.fixture(scope="session")
def zero17(dom17):
    return zero_potential(dom17)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
