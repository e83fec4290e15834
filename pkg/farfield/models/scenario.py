"""
Experiment scenarios, line-scan records and comparison reports
"""
from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from farfield.models.field import LineField
from farfield.models.grid import LineGrid, PlanarGrid
from farfield.models.source import SourceModel


class PairKind(str, Enum):
    """Built-in two-radiator source presets"""
    MONOPOLE_PAIR = "monopole-pair"
    DIPOLE_PAIR = "dipole-pair"


class Method(str, Enum):
    """Far-field prediction methods"""
    FPS = "FPS"  # planar array, plane-wave series
    FPK = "FPK"  # planar array, Kirchhoff integral
    FLS = "FLS"  # linear array, cylindrical series
    FLT = "FLT"  # linear array, transfer function


class Scenario(BaseModel):
    """Source layout plus near measurement grid and far reference line"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    model: SourceModel
    near_grid: PlanarGrid
    far_line: LineGrid
    frequency: float = Field(gt=0)
    source_diameter: float = Field(gt=0, description="D, m")

    @model_validator(mode="after")
    def _consistent(self) -> "Scenario":
        if not self.near_grid.z_plane < self.far_line.z_plane:
            raise ValueError("near plane must lie below the far line")
        if self.frequency != self.model.frequency:
            raise ValueError("scenario frequency differs from source model frequency")
        return self

    @property
    def z_near(self) -> float:
        return self.near_grid.z_plane

    @property
    def z_far(self) -> float:
        return self.far_line.z_plane

    @property
    def sound_speed(self) -> float:
        return self.model.medium.sound_speed

    @property
    def near_line(self) -> LineGrid:
        """The array position at y = 0"""
        return LineGrid(x_coords=self.near_grid.x_coords, y0=0.0, z_plane=self.z_near)


class ScanRecord(BaseModel):
    """One array position plus the immobile reference microphone reading"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    line: LineField
    reference_value: complex = Field(description="non-zero; checked by normalize_scans")


class ComparisonReport(BaseModel):
    """Peak-normalized comparison of a predicted far-field curve with a reference"""

    model_config = ConfigDict(frozen=True)

    method: Method
    rms_divergence: float = Field(ge=0)
    peak_ratio: float
    null_depth_db: float
    subset_size: Optional[int] = None
    label: Optional[str] = None
