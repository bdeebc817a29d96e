import random

import pytest

from simprank.data import parse_candidate_file

from support import TOY_CANDIDATES


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240817)


@pytest.fixture(scope="session")
def toy_corpus():
    return parse_candidate_file(str(TOY_CANDIDATES))
