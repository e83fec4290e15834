"""
Planar-array far-field prediction

FPS decomposes the windowed near-field grid into plane waves and advances each
by exp(i*kz*dz). FPK evaluates the Kirchhoff integral with the soft-body Green's
function, either exactly or in its far-field (phased-array) reduction.
"""
import math
from typing import Optional, Union

import numpy as np

from farfield.core.exceptions import DomainError, PropagationError, SingularityError
from farfield.core.logging import get_logger
from farfield.models.field import AngularSpectrum, FarFieldRequest, PlanarField
from farfield.models.grid import PlanarGrid, Quadrature
from farfield.services.field_model import fresnel_parameter
from farfield.services.sampling import aperture_weights, kz_component, spectral_lattice_for

logger = get_logger(__name__)


def imaginary_source_margin(
    source: Union[PlanarGrid, AngularSpectrum], z_near: float, z_far: float
) -> float:
    """
    Lower bound on M from the periodic-image criterion.

    The spectral lattice repeats the aperture every M·Δx (and M·Δȳ); M must be
    much larger than the propagation distance in grid steps. Accepts the near
    grid or a spectrum decomposed from it.
    """
    if z_far < z_near:
        raise PropagationError("far plane lies behind the near plane")
    dy = source.dy if isinstance(source, AngularSpectrum) else source.dy_mean
    dz = z_far - z_near
    return max(dz / source.dx, dz / dy)


def fps_decompose(
    field: PlanarField,
    M: int,
    windowed: bool = True,
    quadrature: Optional[Quadrature] = None,
) -> AngularSpectrum:
    """
    Plane-wave coefficients of a planar near field.

    a[m, l] = (1/S) Σ_j Σ_n Δs·h·p·exp(-i kx_m x_n - i ky_l y_j), S = ΣΔs.

    Args:
        field: Measured pressures on the near grid
        M: Harmonics per axis (zero padding when M > N, J)
        windowed: Apply the 2-D Hann window; False replaces h by 1, and the
            round trip through fps_propagate is then exact on uniform grids only
        quadrature: Element-area rule; defaults to trapezoid when windowed,
            cell otherwise

    Returns:
        AngularSpectrum referenced to the near plane
    """
    grid = field.grid
    lattice = spectral_lattice_for(grid, M, field.wavenumber)
    weights, total_area = aperture_weights(grid, windowed, quadrature)

    ex = np.exp(-1j * np.outer(lattice.kx, grid.x_coords))
    ey = np.exp(-1j * np.outer(lattice.ky, grid.y_coords))
    coeffs = ex @ (weights * field.values) @ ey.T / total_area

    N, J = grid.shape
    return AngularSpectrum(
        lattice=lattice,
        coeffs=coeffs,
        z_ref=grid.z_plane,
        total_area=total_area,
        n_x=N,
        n_y=J,
        dx=grid.dx,
        dy=grid.dy_mean,
    )


def fps_propagate(
    spec: AngularSpectrum,
    req: FarFieldRequest,
    margin_factor: float = 3.0,
) -> np.ndarray:
    """
    Evaluate the plane-wave series at the requested far-plane points.

    p(x, y, z_far) = (JN/M²) Σ a[m, l] exp(i kx x + i ky y + i kz (z_far - z_ref))

    Evanescent harmonics are kept; their imaginary kz makes them decay.
    """
    dz = req.z_far - spec.z_ref
    if dz < 0:
        raise PropagationError(
            f"far plane z={req.z_far} lies behind the reference plane z={spec.z_ref}"
        )

    lattice = spec.lattice
    M = lattice.M
    needed = margin_factor * imaginary_source_margin(spec, spec.z_ref, req.z_far)
    if dz > 0 and M < needed:
        logger.warning(
            "imaginary_source_margin_low",
            harmonics=M,
            recommended=int(math.ceil(needed)),
            distance=dz,
        )

    kx = lattice.kx
    ky = lattice.ky
    kz = kz_component(lattice.k, kx[:, None], ky[None, :])
    advanced = spec.coeffs * np.exp(1j * kz * dz)

    ex = np.exp(1j * np.outer(req.x, kx))
    ey = np.exp(1j * np.outer(req.y, ky))
    scale = spec.n_x * spec.n_y / float(M * M)
    return scale * np.sum((ex @ advanced) * ey, axis=1)


def steered_response(
    field: PlanarField,
    kx,
    ky,
    windowed: bool = True,
    quadrature: Optional[Quadrature] = None,
) -> np.ndarray:
    """Weighted array output Σ Δs·h·p·exp(-i kx x_n - i ky y_j) for each (kx, ky) pair"""
    kx = np.atleast_1d(np.asarray(kx, dtype=float))
    ky = np.broadcast_to(np.asarray(ky, dtype=float), kx.shape)
    grid = field.grid
    weights, _ = aperture_weights(grid, windowed, quadrature)
    ex = np.exp(-1j * np.outer(kx, grid.x_coords))
    ey = np.exp(-1j * np.outer(ky, grid.y_coords))
    return np.sum((ex @ (weights * field.values)) * ey, axis=1)


def _far_geometry(grid: PlanarGrid, req: FarFieldRequest):
    dz = req.z_far - grid.z_plane
    if dz <= 0:
        raise PropagationError(
            f"requested points at z={req.z_far} are not in front of the array plane z={grid.z_plane}"
        )
    xc, yc = grid.center
    rx = req.x - xc
    ry = req.y - yc
    R = np.sqrt(rx * rx + ry * ry + dz * dz)
    return rx, ry, R, dz / R


def _check_far_zone(
    wavelength: float,
    R: np.ndarray,
    source_diameter: Optional[float],
    fresnel_warn: float,
) -> None:
    if source_diameter is None:
        return
    fr = min(fresnel_parameter(wavelength, float(r), source_diameter) for r in R)
    if fr <= 1.0:
        raise DomainError(f"Fresnel parameter {fr:.2f} puts the far points outside the far zone")
    if fr < fresnel_warn:
        logger.warning("fresnel_parameter_low", fresnel=round(fr, 3), threshold=fresnel_warn)


def fpk_predict(
    field: PlanarField,
    req: FarFieldRequest,
    windowed: bool = True,
    quadrature: Optional[Quadrature] = None,
    source_diameter: Optional[float] = None,
    fresnel_warn: float = 3.0,
) -> np.ndarray:
    """
    Far-field reduction of the soft-body Kirchhoff integral.

    p = -(ik cos α / 2πR) Σ Δs·h·p·exp(-ik (x/R) x_n - ik (y/R) y_j),
    with R and α measured from the array center. Passing the source diameter
    enables the Fresnel-parameter checks at every requested point.
    """
    rx, ry, R, cos_alpha = _far_geometry(field.grid, req)
    _check_far_zone(field.wavelength, R, source_diameter, fresnel_warn)
    k = field.wavenumber
    beam = steered_response(field, k * rx / R, k * ry / R, windowed, quadrature)
    return -1j * k * cos_alpha / (2.0 * math.pi * R) * beam


def _image_distances(r, r_prime, z_near: float):
    r = np.asarray(r, dtype=float)
    r_prime = np.asarray(r_prime, dtype=float)
    d = r - r_prime
    lateral = d[..., 0] ** 2 + d[..., 1] ** 2
    dz_direct = r[..., 2] - r_prime[..., 2]
    dz_image = r[..., 2] - 2.0 * z_near + r_prime[..., 2]
    R1 = np.sqrt(lateral + dz_direct ** 2)
    R2 = np.sqrt(lateral + dz_image ** 2)
    if np.any(R1 == 0) or np.any(R2 == 0):
        raise SingularityError("field point coincides with the source point or its image")
    return R1, R2, dz_direct, dz_image


def soft_green(r, r_prime, z_near: float, k: float):
    """
    Green's function vanishing on the plane z = z_near.

    G = (1/4π)(exp(ikR')/R' - exp(ikR'')/R''), R'' measured to the mirror
    image of r_prime across the plane.
    """
    R1, R2, _, _ = _image_distances(r, r_prime, z_near)
    g = (np.exp(1j * k * R1) / R1 - np.exp(1j * k * R2) / R2) / (4.0 * math.pi)
    return g[()] if np.ndim(g) == 0 else g


def soft_green_normal_derivative(r, r_prime, z_near: float, k: float):
    """∂G/∂z with respect to the surface point r"""
    R1, R2, dz_direct, dz_image = _image_distances(r, r_prime, z_near)
    t1 = (1j * k - 1.0 / R1) * np.exp(1j * k * R1) / R1 * dz_direct / R1
    t2 = (1j * k - 1.0 / R2) * np.exp(1j * k * R2) / R2 * dz_image / R2
    dg = (t1 - t2) / (4.0 * math.pi)
    return dg[()] if np.ndim(dg) == 0 else dg


def kirchhoff_integral(
    field: PlanarField,
    req: FarFieldRequest,
    windowed: bool = True,
    quadrature: Optional[Quadrature] = None,
) -> np.ndarray:
    """
    Kirchhoff integral over the finite aperture with the full soft-body
    Green's function: p(r') = Σ Δs·h·p(r)·∂G(r, r')/∂z.
    """
    grid = field.grid
    _far_geometry(grid, req)
    weights, _ = aperture_weights(grid, windowed, quadrature)
    source = (weights * field.values).reshape(-1)
    nodes = grid.points()
    out = np.empty(req.points.shape[0], dtype=complex)
    for i, target in enumerate(req.points):
        dg = soft_green_normal_derivative(nodes, target[None, :], grid.z_plane, field.wavenumber)
        out[i] = np.sum(source * dg)
    return out
