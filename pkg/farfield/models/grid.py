"""
Measurement lattices and the spectral (wavenumber) lattice
"""
import math
from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from farfield.core.exceptions import DegenerateGridError
from farfield.models._arrays import RealVector


class Quadrature(str, Enum):
    """Element-area rule for aperture sums"""
    TRAPEZOID = "trapezoid"  # one-sided half intervals on the boundary
    CELL = "cell"  # every node owns a full mean-step cell


def _check_ascending(name: str, v: np.ndarray) -> np.ndarray:
    if v.size == 0:
        raise ValueError(f"{name} must not be empty")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} must be finite")
    if v.size > 1 and not np.all(np.diff(v) > 0):
        raise ValueError(f"{name} must be strictly ascending")
    return v


def _mean_step(coords: np.ndarray, axis: str) -> float:
    if coords.size < 2:
        raise DegenerateGridError(f"at least two nodes along {axis} are required")
    return float(coords[-1] - coords[0]) / (coords.size - 1)


class PlanarGrid(BaseModel):
    """x-y lattice at fixed z; y may be non-uniform (line scans)"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    x_coords: RealVector
    y_coords: RealVector
    z_plane: float

    @field_validator("x_coords", "y_coords")
    @classmethod
    def _ascending(cls, v: np.ndarray, info) -> np.ndarray:
        return _check_ascending(info.field_name, v)

    @property
    def shape(self) -> tuple:
        return (self.x_coords.size, self.y_coords.size)

    @property
    def dx(self) -> float:
        """Interelement distance along x"""
        return _mean_step(self.x_coords, "x")

    @property
    def dy_mean(self) -> float:
        """Average scan step along y"""
        return _mean_step(self.y_coords, "y")

    @property
    def center(self) -> tuple:
        return (
            0.5 * float(self.x_coords[0] + self.x_coords[-1]),
            0.5 * float(self.y_coords[0] + self.y_coords[-1]),
        )

    def points(self) -> np.ndarray:
        """(N*J, 3) node coordinates, x-major order"""
        xx, yy = np.meshgrid(self.x_coords, self.y_coords, indexing="ij")
        zz = np.full(xx.shape, self.z_plane)
        return np.stack([xx.ravel(), yy.ravel(), zz.ravel()], axis=1)

    def shifted(self, dx: float = 0.0, dy: float = 0.0) -> "PlanarGrid":
        return PlanarGrid(
            x_coords=self.x_coords + dx,
            y_coords=self.y_coords + dy,
            z_plane=self.z_plane,
        )


class LineGrid(BaseModel):
    """Single array position: x lattice at (y0, z)"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    x_coords: RealVector
    y0: float = 0.0
    z_plane: float

    @field_validator("x_coords")
    @classmethod
    def _ascending(cls, v: np.ndarray) -> np.ndarray:
        v = _check_ascending("x_coords", v)
        if v.size < 2:
            raise ValueError("a line array needs at least two elements")
        return v

    @property
    def size(self) -> int:
        return self.x_coords.size

    @property
    def dx(self) -> float:
        return _mean_step(self.x_coords, "x")

    @property
    def center(self) -> float:
        return 0.5 * float(self.x_coords[0] + self.x_coords[-1])

    def points(self) -> np.ndarray:
        n = self.x_coords.size
        return np.stack(
            [self.x_coords, np.full(n, self.y0), np.full(n, self.z_plane)], axis=1
        )


class SpectralLattice(BaseModel):
    """Wavenumber lattice k_xm = m*dkx, m in {-M/2, ..., M/2 - 1}"""

    model_config = ConfigDict(frozen=True)

    M: int = Field(gt=0)
    dkx: float = Field(gt=0, description="rad/m")
    dky: Optional[float] = Field(None, gt=0, description="rad/m, planar only")
    k: float = Field(gt=0, description="acoustic wavenumber, rad/m")

    @model_validator(mode="after")
    def _even(self) -> "SpectralLattice":
        if self.M % 2:
            raise ValueError("M must be even")
        return self

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.M // 2, self.M // 2)

    @property
    def kx(self) -> np.ndarray:
        return self.indices * self.dkx

    @property
    def ky(self) -> np.ndarray:
        if self.dky is None:
            raise DegenerateGridError("line lattices have no ky axis")
        return self.indices * self.dky

    @property
    def kx_edge(self) -> float:
        """Largest |k_x| represented on the lattice"""
        return 0.5 * self.M * self.dkx

    def index_of(self, m: int) -> int:
        """Array position of harmonic m"""
        return m + self.M // 2

    @staticmethod
    def spacing(M: int, step: float) -> float:
        return 2.0 * math.pi / (M * step)
