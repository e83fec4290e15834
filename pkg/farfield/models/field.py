"""
Sampled fields, their spectra and far-field requests
"""
import math
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from farfield.core.exceptions import DomainError
from farfield.models._arrays import ComplexArray, RealArray
from farfield.models.grid import LineGrid, PlanarGrid, SpectralLattice


class CylindricalBasis(str, Enum):
    """Radial propagator of the linear-array series"""
    ASYMPTOTIC = "asymptotic"  # sqrt(z_near/z_far)·exp(iκΔz)
    HANKEL = "hankel"  # H0(κ z_far)/H0(κ z_near)


class _MeasuredField(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    frequency: float = Field(gt=0, description="Hz")
    sound_speed: float = Field(300.0, gt=0, description="m/s")

    @property
    def wavenumber(self) -> float:
        return 2.0 * math.pi * self.frequency / self.sound_speed

    @property
    def wavelength(self) -> float:
        return self.sound_speed / self.frequency


class PlanarField(_MeasuredField):
    """Complex pressures p(x_n, y_j, z) on a planar grid, values[n, j]"""

    grid: PlanarGrid
    values: ComplexArray

    @model_validator(mode="after")
    def _shape(self) -> "PlanarField":
        if self.values.shape != self.grid.shape:
            raise ValueError(
                f"values shape {self.values.shape} does not match grid {self.grid.shape}"
            )
        return self

    def row(self, j: int) -> "LineField":
        """The line scan at y_j"""
        grid = LineGrid(
            x_coords=self.grid.x_coords,
            y0=float(self.grid.y_coords[j]),
            z_plane=self.grid.z_plane,
        )
        return LineField(
            grid=grid,
            values=self.values[:, j],
            frequency=self.frequency,
            sound_speed=self.sound_speed,
        )

    def scaled(self, factor: complex) -> "PlanarField":
        return self.model_copy(update={"values": _readonly(self.values * factor)})


class LineField(_MeasuredField):
    """Complex pressures p(x_n, y0, z) along one array position"""

    grid: LineGrid
    values: ComplexArray

    @model_validator(mode="after")
    def _shape(self) -> "LineField":
        if self.values.shape != (self.grid.size,):
            raise ValueError(
                f"values shape {self.values.shape} does not match {self.grid.size} elements"
            )
        return self

    def scaled(self, factor: complex) -> "LineField":
        return self.model_copy(update={"values": _readonly(self.values * factor)})


class AngularSpectrum(BaseModel):
    """Plane-wave coefficients a_lm, stored as coeffs[m, l]"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    lattice: SpectralLattice
    coeffs: ComplexArray
    z_ref: float
    total_area: float = Field(gt=0, description="S, m^2")
    n_x: int = Field(gt=0, description="N, nodes along x")
    n_y: int = Field(gt=0, description="J, scan positions along y")
    dx: float = Field(gt=0)
    dy: float = Field(gt=0)

    @model_validator(mode="after")
    def _shape(self) -> "AngularSpectrum":
        M = self.lattice.M
        if self.coeffs.shape != (M, M):
            raise ValueError(f"coefficients must be {M}x{M}")
        return self


class LineSpectrum(BaseModel):
    """Cylindrical-series coefficients b_m of one line array"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    M: int = Field(gt=0)
    coeffs: ComplexArray
    dkx: float = Field(gt=0)
    z_ref: float
    k: float = Field(gt=0)
    n_elements: int = Field(ge=2)
    dx: float = Field(gt=0)

    @model_validator(mode="after")
    def _shape(self) -> "LineSpectrum":
        if self.coeffs.shape != (self.M,):
            raise ValueError(f"expected {self.M} coefficients, got {self.coeffs.shape}")
        return self

    @property
    def kx(self) -> np.ndarray:
        return np.arange(-self.M // 2, self.M // 2) * self.dkx


class FarFieldRequest(BaseModel):
    """Evaluation points sharing one far plane z = z_far"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    points: RealArray

    @field_validator("points")
    @classmethod
    def _on_one_plane(cls, v: np.ndarray) -> np.ndarray:
        if v.ndim != 2 or v.shape[1] != 3:
            raise ValueError("points must be a (P, 3) array")
        if v.shape[0] == 0:
            raise ValueError("at least one point is required")
        if not np.all(v[:, 2] == v[0, 2]):
            raise ValueError("all points must share the same z")
        return v

    @property
    def z_far(self) -> float:
        return float(self.points[0, 2])

    @property
    def x(self) -> np.ndarray:
        return self.points[:, 0]

    @property
    def y(self) -> np.ndarray:
        return self.points[:, 1]

    @classmethod
    def on_line(cls, x_points, y0: float, z_far: float) -> "FarFieldRequest":
        x = np.asarray(x_points, dtype=float).reshape(-1)
        return cls(points=np.stack([x, np.full(x.size, y0), np.full(x.size, z_far)], axis=1))

    @classmethod
    def on_grid(cls, grid: PlanarGrid, z_far: float) -> "FarFieldRequest":
        pts = grid.points()
        pts[:, 2] = z_far
        return cls(points=pts)


class CutoffFilter(BaseModel):
    """F(k_x): pass band |k_x| <= kx_max with a raised-cosine edge"""

    model_config = ConfigDict(frozen=True)

    kx_max: float = Field(gt=0, description="rad/m")
    taper_width: float = Field(0.0, ge=0, description="rad/m")

    def response(self, kx) -> np.ndarray:
        a = np.abs(np.asarray(kx, dtype=float))
        if math.isinf(self.kx_max):
            return np.ones_like(a)
        if self.taper_width == 0:
            return (a <= self.kx_max).astype(float)
        start = self.kx_max - self.taper_width
        t = np.clip((a - start) / self.taper_width, 0.0, 1.0)
        return np.where(a > self.kx_max, 0.0, 0.5 * (1.0 + np.cos(math.pi * t)))

    @classmethod
    def for_band(
        cls, k: float, l_max: int, z_near: float, taper_width: float = 0.0
    ) -> "CutoffFilter":
        """
        Pass band kx_max = sqrt(k² + (l_max + 1)/z_near²): cylindrical
        harmonics up to order l_max stay in their asymptotic regime at z_near.
        """
        if k <= 0 or z_near <= 0 or l_max < 0:
            raise DomainError("band edge needs k > 0, z_near > 0 and l_max >= 0")
        return cls(kx_max=math.sqrt(k * k + (l_max + 1) / z_near ** 2), taper_width=taper_width)

    @classmethod
    def passthrough(cls) -> "CutoffFilter":
        """F = 1 everywhere"""
        return cls(kx_max=math.inf)


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr)
    arr.setflags(write=False)
    return arr
