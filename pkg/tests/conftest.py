"""
Shared fixtures: chamber scenarios and small uniform lattices
"""
import math

import numpy as np
import pytest

from farfield.models.field import LineField, PlanarField
from farfield.models.grid import LineGrid, PlanarGrid
from farfield.models.scenario import PairKind
from farfield.models.source import Medium, PointSource, SourceKind, SourceModel
from farfield.services.harness import chamber_scenario


def frequency_for(k: float, sound_speed: float = 300.0) -> float:
    """Frequency giving wavenumber k"""
    return k * sound_speed / (2.0 * math.pi)


@pytest.fixture(scope="session")
def scenario_500():
    return chamber_scenario(500.0)


@pytest.fixture(scope="session")
def scenario_1500():
    return chamber_scenario(1500.0)


@pytest.fixture(scope="session")
def scenario_1500_22():
    return chamber_scenario(1500.0, PairKind.MONOPOLE_PAIR, n_elements=22)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def monopole_k10():
    """Unit monopole at the origin with k = 10 rad/m"""
    return SourceModel(
        sources=[PointSource(kind=SourceKind.MONOPOLE, position=(0.0, 0.0, 0.0))],
        medium=Medium(sound_speed=300.0),
        frequency=frequency_for(10.0),
    )


@pytest.fixture
def uniform_grid():
    """8 x 6 uniform grid, Δx = 0.1, Δy = 0.12, at z = 0.28"""
    return PlanarGrid(
        x_coords=np.arange(8) * 0.1 - 0.35,
        y_coords=np.arange(6) * 0.12 - 0.3,
        z_plane=0.28,
    )


@pytest.fixture
def random_planar(uniform_grid, rng):
    values = rng.normal(size=uniform_grid.shape) + 1j * rng.normal(size=uniform_grid.shape)
    return PlanarField(grid=uniform_grid, values=values, frequency=1500.0)


@pytest.fixture
def random_line(rng):
    grid = LineGrid(x_coords=np.arange(10) * 0.1 - 0.45, y0=0.0, z_plane=0.28)
    values = rng.normal(size=10) + 1j * rng.normal(size=10)
    return LineField(grid=grid, values=values, frequency=1500.0)
