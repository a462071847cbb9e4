import random
from fractions import Fraction

import pytest

import config
from models.metric import rational_numbering_code
from models.worlds import make_world


@pytest.fixture
def rational_world():
    return make_world("R-rational")


@pytest.fixture
def registry_world():
    return make_world("R-registry")


@pytest.fixture
def kspace_world():
    return make_world("K-space --fuel 1000")


@pytest.fixture
def rng():
    return random.Random(config.SAMPLE_SEED)


@pytest.fixture
def cq():
    """Shorthand for the rational numbering code of a literal."""
    return lambda value: rational_numbering_code(Fraction(value))
