import random
from functools import lru_cache

import pytest

from parkgame.parking import PreferenceProfile, enumerate_parking_functions, park_sequence


@lru_cache(maxsize=None)
def all_pf(n, m=None, increasing=False):
    return tuple(enumerate_parking_functions(n, m, weakly_increasing_only=increasing))


def random_pf_nm(n, m, rng):
    """Uniform member of PF_{n,m} by rejection, membership decided by simulation."""
    while True:
        prefs = tuple(rng.randint(1, m) for _ in range(n))
        if park_sequence(prefs, m)[0] is not None:
            return PreferenceProfile(prefs, m)


@pytest.fixture
def rng():
    return random.Random(20240907)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
