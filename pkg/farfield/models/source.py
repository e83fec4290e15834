"""
Source models driving the analytic field oracle
"""
import math
from enum import Enum
from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class SourceKind(str, Enum):
    """Point radiator type"""
    MONOPOLE = "monopole"
    DIPOLE = "dipole"


class PointSource(BaseModel):
    """Point radiator with complex amplitude A (conventional units)"""

    model_config = ConfigDict(frozen=True)

    kind: SourceKind = SourceKind.MONOPOLE
    position: Tuple[float, float, float]
    amplitude: complex = 1.0 + 0.0j
    # Dipole only: the theta = 0 direction.
    axis: Tuple[float, float, float] = (0.0, 0.0, 1.0)

    @field_validator("amplitude")
    @classmethod
    def _finite_amplitude(cls, v: complex) -> complex:
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise ValueError("amplitude must be finite")
        return v

    @model_validator(mode="after")
    def _unit_axis(self) -> "PointSource":
        if self.kind == SourceKind.DIPOLE:
            norm = math.sqrt(sum(c * c for c in self.axis))
            if abs(norm - 1.0) > 1e-12:
                raise ValueError(f"dipole axis must have unit norm, got {norm!r}")
        return self


class Medium(BaseModel):
    """Homogeneous lossless fluid"""

    model_config = ConfigDict(frozen=True)

    sound_speed: float = Field(300.0, gt=0, description="c, m/s")

    def wavelength(self, frequency: float) -> float:
        return self.sound_speed / frequency

    def wavenumber(self, frequency: float) -> float:
        return 2.0 * math.pi * frequency / self.sound_speed


class SourceModel(BaseModel):
    """Coherent set of point radiators at one frequency"""

    model_config = ConfigDict(frozen=True)

    sources: List[PointSource] = Field(min_length=1)
    medium: Medium = Field(default_factory=Medium)
    frequency: float = Field(gt=0, description="Hz")

    @property
    def wavelength(self) -> float:
        return self.medium.wavelength(self.frequency)

    @property
    def wavenumber(self) -> float:
        return self.medium.wavenumber(self.frequency)

    @property
    def angular_frequency(self) -> float:
        return 2.0 * math.pi * self.frequency

    def positions(self) -> np.ndarray:
        """(S, 3) array of source positions"""
        return np.array([s.position for s in self.sources], dtype=float)
