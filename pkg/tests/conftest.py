import numpy as np
import pytest

from helmfem.core.models import ProblemKind, ProblemSpec


def pytest_addoption(parser):
    parser.addoption(
        "--runslow", action="store_true", default=False, help="run acceptance-scale tests"
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def soundsoft():
    return ProblemSpec(kind=ProblemKind.SOUND_SOFT, wavenumber=np.pi)


@pytest.fixture
def penetrable():
    return ProblemSpec(kind=ProblemKind.PENETRABLE, wavenumber=np.pi)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
