import numpy as np
import pytest

from dea_rts.models import Dataset
from dea_rts.tables import table1


@pytest.fixture
def t1():
    return table1()


def random_dataset(seed, max_n=8, max_factors=3, low=1, high=6):
    """Small integer-valued dataset; ties make positive-slack units common."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, max_n + 1))
    m = int(rng.integers(1, max_factors + 1))
    s = int(rng.integers(1, max_factors + 1))
    X = rng.integers(low, high + 1, size=(m, n)).astype(float)
    Y = rng.integers(low, high + 1, size=(s, n)).astype(float)
    return Dataset(tuple(f"U{j}" for j in range(n)), X, Y)


# one line per acceptance criterion, filled in by tests/test_acceptance.py
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
