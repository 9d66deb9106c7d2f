import math

import numpy as np
import pytest
from hypothesis import settings

from longwave import grid as gs

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def periodic():
    """Small 2 pi grid for operator identities."""
    return gs.make_grid(2 * math.pi, 64)


@pytest.fixture(scope="session")
def long_grid():
    """The experiment grid: L = 64 pi, N = 1024."""
    return gs.make_grid(64 * math.pi, 1024)


@pytest.fixture(scope="session")
def fine_grid():
    """Resolved grid for closed-form residual identities."""
    return gs.make_grid(64 * math.pi, 4096)


def smooth_field(grid):
    x = grid.x * (2 * np.pi / grid.length)
    return np.exp(np.sin(x)) + 0.3 * np.cos(2 * x)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
