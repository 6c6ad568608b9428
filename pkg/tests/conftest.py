import math

import numpy as np
import pytest

# Lines collected by test_acceptance.py, echoed in the terminal summary.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def hbin(p: float) -> float:
    """Binary entropy in bits, written out with math.log2 (independent of the package)."""
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_unit_vectors(rng, shape):
    g = rng.standard_normal(tuple(shape) + (3,))
    return g / np.linalg.norm(g, axis=-1, keepdims=True)
