"""
Quadrature weights, Hann windows and the spectral lattice shared by all methods
"""
import math
from typing import Optional, Union

import numpy as np

from farfield.core.exceptions import ConfigurationError, DegenerateGridError, DomainError
from farfield.models.grid import LineGrid, PlanarGrid, Quadrature, SpectralLattice


def kz_component(k: float, kx, ky=0.0):
    """
    Normal wavenumber of a plane wave with transverse components (kx, ky).

    Propagating waves get a non-negative real root, evanescent waves a
    non-negative imaginary one, so exp(i*kz*dz) never grows for dz > 0
    (sources in z <= 0).
    """
    if k <= 0:
        raise DomainError("wavenumber must be positive")
    kx = np.asarray(kx, dtype=float)
    ky = np.asarray(ky, dtype=float)
    d = k * k - kx * kx - ky * ky
    root = np.sqrt(np.abs(d))
    kz = np.where(d >= 0, root + 0j, 1j * root)
    return kz[()] if kz.ndim == 0 else kz


def _hann_factor(coords: np.ndarray, step: float) -> np.ndarray:
    span = coords[-1] - coords[0] + step
    return 1.0 - np.cos(2.0 * math.pi * (coords - coords[0] + 0.5 * step) / span)


def hann2d_weights(grid: PlanarGrid) -> np.ndarray:
    """Two-dimensional Hann window at every node, shape (N, J)"""
    wx = _hann_factor(grid.x_coords, grid.dx)
    wy = _hann_factor(grid.y_coords, grid.dy_mean)
    return 0.25 * np.outer(wx, wy)


def hann2d(grid: PlanarGrid, n: int, j: int) -> float:
    """Two-dimensional Hann window at node (n, j), zero-based indices"""
    N, J = grid.shape
    if not (0 <= n < N and 0 <= j < J):
        raise IndexError(f"node ({n}, {j}) outside a {N}x{J} grid")
    wx = _hann_factor(grid.x_coords, grid.dx)[n]
    wy = _hann_factor(grid.y_coords, grid.dy_mean)[j]
    return float(0.25 * wx * wy)


def hann1d_normalized(grid: LineGrid) -> np.ndarray:
    """Hann window of a line array scaled so that sum(h**2) == N"""
    u = _hann_factor(grid.x_coords, grid.dx)
    W = math.sqrt(float(np.sum(u * u)) / u.size)
    return u / W


def _trapezoid_widths(coords: np.ndarray) -> np.ndarray:
    widths = np.empty_like(coords)
    widths[1:-1] = 0.5 * (coords[2:] - coords[:-2])
    widths[0] = 0.5 * (coords[1] - coords[0])
    widths[-1] = 0.5 * (coords[-1] - coords[-2])
    return widths


def element_areas(grid: PlanarGrid, quadrature: Quadrature = Quadrature.TRAPEZOID) -> np.ndarray:
    """
    Area Δs of every grid element, shape (N, J).

    Trapezoid: half-intervals to each neighbour, one-sided on the boundary.
    Cell: the mean-step cell Δx·Δȳ at every node.
    """
    N, J = grid.shape
    if N < 2 or J < 2:
        raise DegenerateGridError(f"element areas need at least 2x2 nodes, got {N}x{J}")
    if Quadrature(quadrature) == Quadrature.CELL:
        return np.full((N, J), grid.dx * grid.dy_mean)
    return np.outer(_trapezoid_widths(grid.x_coords), _trapezoid_widths(grid.y_coords))


def aperture_weights(
    grid: PlanarGrid,
    windowed: bool = True,
    quadrature: Optional[Quadrature] = None,
) -> tuple:
    """
    Quadrature weights Δs·h and the total area S = ΣΔs.

    Without an explicit quadrature, windowed data use the trapezoid rule and
    unwindowed (test-mode) data use full cells, which makes the spectral
    transforms exact inverses of each other.
    """
    if quadrature is None:
        quadrature = Quadrature.TRAPEZOID if windowed else Quadrature.CELL
    areas = element_areas(grid, quadrature)
    weights = areas * hann2d_weights(grid) if windowed else areas
    return weights, float(areas.sum())


def spectral_lattice_for(
    grid: Union[PlanarGrid, LineGrid],
    M: int,
    k: float,
) -> SpectralLattice:
    """Wavenumber lattice with spacing 2π/(M·step) for the given grid"""
    if M <= 0 or M % 2:
        raise ConfigurationError(f"M must be a positive even integer, got {M}")
    if isinstance(grid, PlanarGrid):
        N, J = grid.shape
        if M < N or M < J:
            raise ConfigurationError(f"M={M} is smaller than the {N}x{J} grid")
        return SpectralLattice(
            M=M,
            dkx=SpectralLattice.spacing(M, grid.dx),
            dky=SpectralLattice.spacing(M, grid.dy_mean),
            k=k,
        )
    if M < grid.size:
        raise ConfigurationError(f"M={M} is smaller than the {grid.size}-element line")
    return SpectralLattice(M=M, dkx=SpectralLattice.spacing(M, grid.dx), k=k)
