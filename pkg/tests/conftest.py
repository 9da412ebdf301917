import random

import pytest

from lamcover.generators import grid_window


@pytest.fixture(scope="session")
def g1():
    return grid_window(1)


@pytest.fixture(scope="session")
def g2():
    return grid_window(2)


@pytest.fixture(scope="session")
def g4():
    return grid_window(4)


@pytest.fixture(scope="session")
def g8():
    return grid_window(8)


@pytest.fixture
def rng():
    return random.Random(20240817)
