import numpy as np
import pytest

from spacetimelab.substrate import ChainState, CouplingProfile


@pytest.fixture
def nn_profile():
    return CouplingProfile.single(1)


@pytest.fixture
def displaced_chain(nn_profile):
    u = np.zeros(100)
    u[0] = 1.0
    return ChainState(u, np.zeros(100), nn_profile)


@pytest.fixture
def rng():
    return np.random.default_rng(20131)
