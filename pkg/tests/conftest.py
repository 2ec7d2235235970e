import numpy as np
import pytest

from ssetd.algebra import PhysicalParams
from ssetd.config import default_config
from ssetd.grid import SpatialGrid, gaussian_packet
from ssetd.report import run_verify


@pytest.fixture(scope="session")
def params():
    return PhysicalParams(1.0, 1.0)


@pytest.fixture(scope="session")
def side_grid(params):
    # Large enough that every test state stays interior-supported over t <= 2.
    return SpatialGrid(4096, 64.0, params.hbar)


@pytest.fixture(scope="session")
def side_packet(side_grid):
    return gaussian_packet(side_grid, -4.0, 0.25, 1.5)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240801)


@pytest.fixture(scope="session")
def verify_report():
    """The full cross-check suite at the default configuration, run once."""
    return run_verify(default_config())
