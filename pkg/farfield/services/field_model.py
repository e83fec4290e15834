"""
Analytic point-source fields and far-field criteria

The direct field of a set of monopoles and dipoles is the ground truth every
holography method is checked against. Time dependence is exp(-i*omega*t).
"""
import math
from typing import Optional, Sequence

import numpy as np

from farfield.core.exceptions import DomainError, SingularityError
from farfield.models.field import LineField, PlanarField
from farfield.models.grid import LineGrid, PlanarGrid
from farfield.models.scenario import PairKind
from farfield.models.source import Medium, PointSource, SourceKind, SourceModel


def fresnel_parameter(wavelength: float, distance_R: float, diameter_D: float) -> float:
    """F_r = λR/D²; values well above 1 mark the Fraunhofer zone"""
    if wavelength <= 0 or distance_R <= 0 or diameter_D <= 0:
        raise DomainError(
            f"Fresnel parameter needs positive inputs, got "
            f"λ={wavelength}, R={distance_R}, D={diameter_D}"
        )
    return wavelength * distance_R / diameter_D ** 2


def fresnel_zone_radius(wavelength: float, distance: float) -> float:
    """Radius of the first Fresnel zone, sqrt(λ·z)"""
    if wavelength <= 0 or distance <= 0:
        raise DomainError("Fresnel zone radius needs positive inputs")
    return math.sqrt(wavelength * distance)


def minimum_aperture(diameter_D: float, wavelength: float, z_near: float) -> float:
    """Source length plus one first-zone radius on each side"""
    if diameter_D <= 0:
        raise DomainError("source diameter must be positive")
    return diameter_D + 2.0 * fresnel_zone_radius(wavelength, z_near)


def direct_field_many(model: SourceModel, points) -> np.ndarray:
    """
    Coherent sum of all source fields at P points.

    Args:
        model: Source layout, medium and frequency
        points: (P, 3) array of evaluation points; P may be zero

    Returns:
        (P,) complex pressures

    Raises:
        SingularityError: a point coincides with a source position
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    k = model.wavenumber
    total = np.zeros(pts.shape[0], dtype=complex)
    for source in model.sources:
        delta = pts - np.asarray(source.position, dtype=float)
        r = np.sqrt(np.einsum("ij,ij->i", delta, delta))
        if np.any(r == 0):
            raise SingularityError(
                f"evaluation point coincides with the {source.kind.value} at {source.position}"
            )
        phase = np.exp(1j * k * r)
        if source.kind == SourceKind.MONOPOLE:
            total += source.amplitude * 1j * k * phase / r
        else:
            cos_theta = delta @ np.asarray(source.axis, dtype=float) / r
            total += source.amplitude * phase * (1j * k / r - 1.0 / r ** 2) * cos_theta
    return total


def direct_field(model: SourceModel, point: Sequence[float]) -> complex:
    """Pressure of the source model at a single point"""
    return complex(direct_field_many(model, np.asarray(point, dtype=float).reshape(1, 3))[0])


def sample_planar(model: SourceModel, grid: PlanarGrid) -> PlanarField:
    """Synthesize what a planar array at the grid nodes would measure"""
    values = direct_field_many(model, grid.points()).reshape(grid.shape)
    return PlanarField(
        grid=grid,
        values=values,
        frequency=model.frequency,
        sound_speed=model.medium.sound_speed,
    )


def sample_line(model: SourceModel, grid: LineGrid) -> LineField:
    """Synthesize a single array position"""
    return LineField(
        grid=grid,
        values=direct_field_many(model, grid.points()),
        frequency=model.frequency,
        sound_speed=model.medium.sound_speed,
    )


def antiphase_pair(
    kind: PairKind,
    diameter_D: float,
    frequency: float,
    medium: Optional[Medium] = None,
    amplitude: complex = 1.0,
    dipole_axis: Sequence[float] = (0.0, 0.0, 1.0),
) -> SourceModel:
    """
    Two radiators on the x axis at z = 0: +A at x = +D/2 and -A at x = -D/2.
    """
    if diameter_D <= 0:
        raise DomainError("source separation must be positive")
    source_kind = SourceKind.DIPOLE if PairKind(kind) == PairKind.DIPOLE_PAIR else SourceKind.MONOPOLE
    axis = tuple(float(c) for c in dipole_axis)
    half = 0.5 * diameter_D
    sources = [
        PointSource(kind=source_kind, position=(half, 0.0, 0.0), amplitude=amplitude, axis=axis),
        PointSource(kind=source_kind, position=(-half, 0.0, 0.0), amplitude=-amplitude, axis=axis),
    ]
    return SourceModel(sources=sources, medium=medium or Medium(), frequency=frequency)
