import warnings

import numpy as np
import pytest

from dlpgalerkin.curves import make_l2

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def circle_half():
    """L2 at theta = pi: the circle of radius 1/2 with two artificial breakpoints."""
    return make_l2(np.pi)


@pytest.fixture
def linear_rhs():
    return lambda z: np.asarray(z).real + 2.0


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def pytest_configure(config):
    warnings.filterwarnings("ignore", message=".*inner quadrature resolves.*")
