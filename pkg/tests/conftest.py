import numpy as np
import pytest

from minkdmp.fixtures import EXAMPLE_A
from minkdmp.verify import random_instances

INSTANCE_SEED = 20240
INSTANCE_COUNT = 200


@pytest.fixture
def example_a():
    return EXAMPLE_A.copy()


@pytest.fixture(scope="session")
def instances():
    """Seeded ``(n, index, A)`` triples, n in 3..8 and index in {1, 2, 3}."""
    return random_instances(INSTANCE_COUNT, seed=INSTANCE_SEED)


@pytest.fixture(scope="session")
def small_instances(instances):
    return instances[::8]


@pytest.fixture
def rng():
    return np.random.default_rng(7)


def jordan(size):
    return np.eye(size, k=1)


# filled by test_acceptance.py, one line per criterion
ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(line)
