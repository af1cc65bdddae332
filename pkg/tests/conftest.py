import numpy as np
import pytest

from qhlab.geom.domains import make_domain


@pytest.fixture(scope="session")
def halfplane():
    return make_domain("halfplane")


@pytest.fixture(scope="session")
def disc():
    return make_domain("disc")


@pytest.fixture(scope="session")
def paraboloid():
    return make_domain("paraboloid", kappa=1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20260818)
