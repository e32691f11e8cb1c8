import random

import pytest

from strabs.mdsqcc.block import build_code
from strabs.mdsqcc.cosets import context, defining_set
from strabs.mdsqcc.gf import tower_for


@pytest.fixture(scope="session")
def tower5():
    return tower_for(5)


@pytest.fixture(scope="session")
def ctx5():
    return context("I", 5)


@pytest.fixture(scope="session")
def ctx23():
    return context("II", 23)


@pytest.fixture(scope="session")
def code5(ctx5):
    """The [26, 21] family-I code behind the q=5, i=2 construction."""
    return build_code(ctx5, defining_set(ctx5, 2))


@pytest.fixture
def rng():
    return random.Random(20150617)
