import math

import numpy as np
import pytest


def brute_force_vstat(y, z):
    """Energy V-statistic by explicit loops over all pairs (exactly rounded sums)."""
    y = [np.atleast_1d(r) for r in np.asarray(y, dtype=float).reshape(len(y), -1)]
    z = [np.atleast_1d(r) for r in np.asarray(z, dtype=float).reshape(len(z), -1)]
    cross = math.fsum(math.dist(a, b) for a in y for b in z)
    wy = math.fsum(math.dist(a, b) for a in y for b in y)
    wz = math.fsum(math.dist(a, b) for a in z for b in z)
    return 2 * cross / (len(y) * len(z)) - wy / len(y) ** 2 - wz / len(z) ** 2


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
