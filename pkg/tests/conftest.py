import numpy as np
import pytest

from pcm.scenes import gallery


@pytest.fixture(scope="session")
def scenes():
    from pcm.scenes import gallery_all
    return gallery_all()


@pytest.fixture(scope="session")
def whole_sphere():
    return gallery("whole_sphere").pieces()


@pytest.fixture(scope="session")
def wander():
    return gallery("fig_wander").pieces()


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
