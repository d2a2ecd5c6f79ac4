import numpy as np
import pytest

from entrogeo import (
    Density1DBackend,
    EntropyKind,
    EuclideanBackend,
    GridDensity,
    QuadraticPotential,
)


@pytest.fixture(scope="session")
def quad1d():
    return EuclideanBackend(QuadraticPotential(np.zeros(1), 1.0))


@pytest.fixture(scope="session")
def quad2d():
    return EuclideanBackend(QuadraticPotential(np.zeros(2), 1.0))


@pytest.fixture(scope="session")
def boltzmann():
    return Density1DBackend(EntropyKind.boltzmann())


@pytest.fixture(scope="session")
def porous2():
    return Density1DBackend(EntropyKind.porous_medium(2.0))


# standard grids: the wide one hosts the Gaussian battery, the sweep one the
# cost profiles, the narrow one the flow verification samples
WIDE = dict(n=512, dx=20.0 / 512, x0=-10.0)
SWEEP = dict(n=256, dx=22.0 / 256, x0=-10.0)
NARROW = dict(n=256, dx=16.0 / 256, x0=-8.0)


def gaussian_on(grid, mean, sigma, boundary="no-flux"):
    return GridDensity.gaussian(mean, sigma, grid["n"], grid["dx"], grid["x0"],
                                boundary)


@pytest.fixture(scope="session")
def sweep_pair():
    """The shipped density endpoint preset: N(0,1) -> N(2,4)."""
    return gaussian_on(SWEEP, 0.0, 1.0), gaussian_on(SWEEP, 2.0, 2.0)
