import math

import numpy as np
import pytest
from hypothesis import settings

from hardylab.grid import Grid

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")


@pytest.fixture(scope="session")
def grid():
    return Grid()


@pytest.fixture(scope="session")
def selfdual():
    # spacing 1/sqrt(n) makes the dual grid coincide with the grid
    return Grid(1024, 1 / 32)


def gaussian(lam):
    return lambda x: np.exp(-math.pi * lam * x * x)


def bound_cases():
    """Eight family instances with their weight levels, all inside E^2_a."""
    from hardylab.families import chirp_family, laplace_family
    return [
        (laplace_family([(1, 1)]), 0.5),
        (laplace_family([(0.6, 1), (0.9, 1)]), 0.5),
        (laplace_family([(0.7, 1), (1.2, -0.5)]), 0.6),
        (laplace_family([(0.8, 1), (1.0, 1j), (1.25, 0.5)]), 0.7),
        (chirp_family([(0.5, 1)]), 0.4),
        (chirp_family([(0.6, 1), (0.8, 0.5j)]), 0.5),
        (chirp_family([(math.tanh(0.4), 1)]), 0.3),
        (laplace_family([(0.3, 1), (2.0, 1)]), 0.25),
    ]


def measured_norms(gs, k, grid):
    """``||D^k f||_2``, ``sup |D^k f|``, ``||D^k f||_1`` and ``sup |xi^k fhat|``."""
    x, dx = grid.points, grid.spacing
    d = gs.derivative(k, x)
    return (math.sqrt(np.sum(np.abs(d) ** 2) * dx), float(np.abs(d).max()),
            float(np.sum(np.abs(d)) * dx), float(np.abs(x ** k * gs.fourier()(x)).max()))


# acceptance outcomes, collected by test_acceptance and echoed at the end of the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
