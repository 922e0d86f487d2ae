import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from homocover.geometry import convex_hull

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

CUBE = np.array([[a, b, c] for a in (0, 1) for b in (0, 1) for c in (0, 1)], dtype=float)
TETRA = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float)
SQUARE = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float)


@pytest.fixture
def square():
    return convex_hull(SQUARE, 2)


@pytest.fixture
def centered_square():
    return convex_hull(2 * SQUARE - 1, 2)


@pytest.fixture
def cube():
    return convex_hull(CUBE, 3)


@pytest.fixture
def tetra():
    return convex_hull(TETRA, 3)


_acceptance_lines = []


def record_acceptance(line):
    _acceptance_lines.append(line)


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_acceptance_lines, key=lambda s: int(s.split("]")[1].split(".")[0])):
            terminalreporter.write_line(line)
