import pytest
from hypothesis import settings

from netcalc.space import Grid, metric_space

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture
def line():
    return metric_space("line")


@pytest.fixture(scope="session")
def unit_grid():
    return Grid(0.0, 1.0, 257)
