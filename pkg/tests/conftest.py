import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def random_triangle(rng, min_angle=0.15):
    """Random triangle with every angle above ``min_angle`` radians."""
    while True:
        tri = rng.uniform(-3, 3, size=(3, 2))
        sides = [np.linalg.norm(tri[(i + 1) % 3] - tri[(i + 2) % 3]) for i in range(3)]
        if min(sides) < 0.2:
            continue
        angles = []
        for i in range(3):
            u, v = tri[(i + 1) % 3] - tri[i], tri[(i + 2) % 3] - tri[i]
            angles.append(math.acos(np.clip(u @ v / np.linalg.norm(u) / np.linalg.norm(v), -1, 1)))
        if min(angles) > min_angle:
            return tri


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


EQUILATERAL = np.array([[1.0, 0.0], [-0.5, math.sqrt(3) / 2], [-0.5, -math.sqrt(3) / 2]])
RIGHT_345 = np.array([[0.0, 0.0], [3.0, 0.0], [0.0, 4.0]])


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance
    except ImportError:
        return
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for _, _, line in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(line)
