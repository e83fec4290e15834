"""
Linear-array far-field prediction

FLS expands a single line of samples into cylindrical harmonics along x and
advances each with its radial propagator; FLT reads the far-field magnitude
straight from the harmonic matching the observation angle. Short arrays are
combined with the hold-max procedure.
"""
import math
from typing import List, Optional, Sequence

import numpy as np
from scipy import special

from farfield.core.exceptions import (
    DomainError,
    LatticeMismatchError,
    OutOfBandError,
    PropagationError,
)
from farfield.core.logging import get_logger
from farfield.models.field import CutoffFilter, CylindricalBasis, LineField, LineSpectrum
from farfield.models.grid import LineGrid
from farfield.services.field_model import fresnel_parameter
from farfield.services.sampling import hann1d_normalized, kz_component, spectral_lattice_for

logger = get_logger(__name__)


def kx_cutoff(k: float, l_max: int, z_near: float) -> float:
    """Largest admissible k_x for harmonics up to azimuthal order l_max"""
    return CutoffFilter.for_band(k, l_max, z_near).kx_max


def yz_fresnel_check(
    wavelength: float,
    z_near: float,
    diameter_yz: float,
    fresnel_warn: float = 3.0,
) -> float:
    """λ·z_near/D_yz², the simplified azimuthal-order criterion; warns when small"""
    value = fresnel_parameter(wavelength, z_near, diameter_yz)
    if value < fresnel_warn:
        logger.warning(
            "yz_fresnel_parameter_low",
            fresnel=round(value, 3),
            threshold=fresnel_warn,
            diameter_yz=diameter_yz,
        )
    return value


def fls_decompose(field: LineField, M: int, windowed: bool = True) -> LineSpectrum:
    """
    b_m = (1/N) Σ_n h₁(x_n)·p(x_n)·exp(-i kx_m x_n)

    windowed=False replaces h₁ by 1.
    """
    grid = field.grid
    lattice = spectral_lattice_for(grid, M, field.wavenumber)
    h = hann1d_normalized(grid) if windowed else np.ones(grid.size)
    coeffs = np.exp(-1j * np.outer(lattice.kx, grid.x_coords)) @ (h * field.values) / grid.size
    return LineSpectrum(
        M=M,
        coeffs=coeffs,
        dkx=lattice.dkx,
        z_ref=grid.z_plane,
        k=field.wavenumber,
        n_elements=grid.size,
        dx=grid.dx,
    )


def _hankel_ratio(kappa: np.ndarray, z_near: float, z_far: float) -> np.ndarray:
    ratio = np.ones(kappa.shape, dtype=complex)
    real = kappa.real
    imag = kappa.imag
    prop = real > 0
    ratio[prop] = special.hankel1(0, real[prop] * z_far) / special.hankel1(0, real[prop] * z_near)
    evan = imag > 0
    a = imag[evan]
    ratio[evan] = special.kve(0, a * z_far) / special.kve(0, a * z_near) * np.exp(-a * (z_far - z_near))
    return ratio


def fls_propagate(
    spec: LineSpectrum,
    filter: CutoffFilter,
    x_points,
    z_near: float,
    z_far: float,
    basis: CylindricalBasis = CylindricalBasis.ASYMPTOTIC,
) -> np.ndarray:
    """
    p(x, y0, z_far) = (N/M)·Σ b_m·F(k_xm)·P_m·exp(i k_xm x)

    P_m is sqrt(z_near/z_far)·exp(iκ_m (z_far - z_near)) for the asymptotic
    basis and H0(κ_m z_far)/H0(κ_m z_near) for the Hankel basis, with z measured
    from the source plane z = 0.
    """
    if z_far < z_near:
        raise PropagationError(f"z_far={z_far} lies behind z_near={z_near}")
    if z_near <= 0:
        raise DomainError("z_near must be positive (distance from the source plane)")

    kx = spec.kx
    kappa = kz_component(spec.k, kx)
    if CylindricalBasis(basis) == CylindricalBasis.HANKEL:
        radial = _hankel_ratio(kappa, z_near, z_far)
    else:
        radial = math.sqrt(z_near / z_far) * np.exp(1j * kappa * (z_far - z_near))

    weighted = spec.coeffs * filter.response(kx) * radial
    x = np.atleast_1d(np.asarray(x_points, dtype=float))
    return (spec.n_elements / spec.M) * (np.exp(1j * np.outer(x, kx)) @ weighted)


def _harmonic_magnitude(spec: LineSpectrum, kx_target: float, interpolate: bool) -> float:
    half = spec.M // 2
    position = kx_target / spec.dkx
    mags = np.abs(spec.coeffs)
    if not interpolate:
        m = int(np.rint(position))
        if not -half <= m < half:
            raise OutOfBandError(f"harmonic {m} lies outside the {spec.M}-point lattice")
        return float(mags[m + half])
    m0 = int(math.floor(position))
    if not -half <= m0 < half - 1:
        raise OutOfBandError(f"harmonics {m0}, {m0 + 1} lie outside the {spec.M}-point lattice")
    t = position - m0
    return float((1.0 - t) * mags[m0 + half] + t * mags[m0 + 1 + half])


def flt_magnitude(
    spec: LineSpectrum,
    alpha: float,
    R: float,
    z_near: float,
    N: Optional[int] = None,
    dx: Optional[float] = None,
    filter: Optional[CutoffFilter] = None,
    interpolate: bool = False,
) -> float:
    """
    |p(α, R)| = |b_m*|·NΔx/R·sqrt(k·z_near·cos α / 2π), k_xm* = k sin α

    Args:
        spec: Line spectrum of the near-field array
        alpha: Observation angle from the z axis, rad
        R: Distance from the origin, m
        z_near: Array distance from the source plane, m
        N, dx: Array size and pitch; taken from the spectrum when omitted
        filter: Pass band; angles mapping outside it are rejected
        interpolate: Interpolate |b| linearly between bracketing harmonics
    """
    if R <= 0 or z_near <= 0:
        raise DomainError("R and z_near must be positive")
    cos_alpha = math.cos(alpha)
    if cos_alpha <= 0:
        raise DomainError(f"angle {math.degrees(alpha):.1f} deg is not in front of the array")
    kx_target = spec.k * math.sin(alpha)
    if filter is not None and abs(kx_target) > filter.kx_max:
        raise OutOfBandError(
            f"k sin(alpha)={kx_target:.3f} exceeds the pass band {filter.kx_max:.3f} rad/m"
        )
    N = spec.n_elements if N is None else N
    dx = spec.dx if dx is None else dx
    b = _harmonic_magnitude(spec, kx_target, interpolate)
    return b * N * dx / R * math.sqrt(spec.k * z_near * cos_alpha / (2.0 * math.pi))


def flt_curve(
    spec: LineSpectrum,
    x_points,
    z_near: float,
    z_far: float,
    filter: Optional[CutoffFilter] = None,
    interpolate: bool = False,
    source_diameter: Optional[float] = None,
    fresnel_warn: float = 3.0,
) -> np.ndarray:
    """FLT magnitudes along the far line z = z_far, angles taken from the origin"""
    x = np.atleast_1d(np.asarray(x_points, dtype=float))
    R = np.hypot(x, z_far)
    if source_diameter is not None:
        wavelength = 2.0 * math.pi / spec.k
        fr = fresnel_parameter(wavelength, float(R.min()), source_diameter)
        if fr < fresnel_warn:
            logger.warning("fresnel_parameter_low", fresnel=round(fr, 3), threshold=fresnel_warn)
    alpha = np.arctan2(x, z_far)
    return np.array(
        [
            flt_magnitude(spec, float(a), float(r), z_near, filter=filter, interpolate=interpolate)
            for a, r in zip(alpha, R)
        ]
    )


def aperture_coverage(
    grid: LineGrid,
    x_points,
    z_far: float,
    source_diameter: float,
    wavelength: float,
) -> np.ndarray:
    """
    Far points whose energy flux crosses the array plane inside the aperture.

    The flux toward a far point x is the source extent [-D/2, D/2] at z = 0
    projected toward x onto the array plane, widened on both sides by the
    first Fresnel zone radius sqrt(λ·z_near). The aperture spans the element
    cells, half a pitch beyond the end elements.
    """
    z_near = grid.z_plane
    if not 0 < z_near < z_far:
        raise DomainError("coverage needs 0 < z_near < z_far")
    if source_diameter <= 0 or wavelength <= 0:
        raise DomainError("source diameter and wavelength must be positive")
    x = np.atleast_1d(np.asarray(x_points, dtype=float))
    t = z_near / z_far
    center = x * t
    half = 0.5 * source_diameter * (1.0 - t) + math.sqrt(wavelength * z_near)
    low = grid.x_coords[0] - 0.5 * grid.dx
    high = grid.x_coords[-1] + 0.5 * grid.dx
    return (center - half >= low) & (center + half <= high)


def hold_max(
    runs: Sequence,
    lattices: Optional[Sequence] = None,
    coverage: Optional[Sequence] = None,
) -> np.ndarray:
    """
    Pointwise maximum magnitude over several runs on a common far lattice.

    With coverage, one boolean mask per run, a point takes the maximum over
    the runs that cover it; points no run covers take the maximum over all.

    Raises:
        DomainError: no runs were given
        LatticeMismatchError: runs differ in length or lattice
    """
    if len(runs) == 0:
        raise DomainError("hold-max needs at least one run")
    mags = [np.abs(np.asarray(r)).reshape(-1) for r in runs]
    size = mags[0].size
    if any(m.size != size for m in mags):
        raise LatticeMismatchError("runs have different lengths")
    if lattices is not None:
        if len(lattices) != len(runs):
            raise LatticeMismatchError("one lattice per run is required")
        first = np.asarray(lattices[0], dtype=float)
        for lat in lattices[1:]:
            lat = np.asarray(lat, dtype=float)
            if lat.shape != first.shape or not np.array_equal(lat, first):
                raise LatticeMismatchError("runs are sampled on different lattices")
    stacked = np.stack(mags)
    if coverage is None:
        return np.max(stacked, axis=0)
    masks = [np.asarray(c, dtype=bool).reshape(-1) for c in coverage]
    if len(masks) != len(mags) or any(m.size != size for m in masks):
        raise LatticeMismatchError("one coverage mask per run and point is required")
    mask = np.stack(masks)
    covered = np.max(np.where(mask, stacked, -np.inf), axis=0)
    return np.where(mask.any(axis=0), covered, np.max(stacked, axis=0))


def subarray_sweep(field: LineField, subset_size: int, stride: int = 1) -> List[LineField]:
    """
    All contiguous subsets of subset_size elements, starting every stride elements.

    Each subset is an independent short array; its window follows from its
    own grid when decomposed.
    """
    N = field.grid.size
    if subset_size < 2 or subset_size > N:
        raise DomainError(f"subset size must lie in [2, {N}], got {subset_size}")
    if stride < 1:
        raise DomainError("stride must be at least one element")
    subsets = []
    for start in range(0, N - subset_size + 1, stride):
        stop = start + subset_size
        grid = LineGrid(
            x_coords=field.grid.x_coords[start:stop],
            y0=field.grid.y0,
            z_plane=field.grid.z_plane,
        )
        subsets.append(
            LineField(
                grid=grid,
                values=field.values[start:stop],
                frequency=field.frequency,
                sound_speed=field.sound_speed,
            )
        )
    return subsets
