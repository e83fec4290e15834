"""
Configuration management for the far-field toolkit
"""
from pathlib import Path
from typing import Optional, Tuple, Type
from functools import lru_cache

from pydantic import Field, field_validator
from pydantic_settings import (
    BaseSettings,
    PydanticBaseSettingsSource,
    SettingsConfigDict,
    YamlConfigSettingsSource,
)

from farfield.core.exceptions import ConfigurationError

# Project root directory
PROJECT_ROOT = Path(__file__).parent.parent.parent
DEFAULT_CONFIG_FILE = PROJECT_ROOT / "config" / "config.yaml"


class Settings(BaseSettings):
    """Toolkit settings with environment variable and YAML support"""

    # Application
    app_name: str = "farfield"
    app_version: str = "1.0.0"
    environment: str = "development"
    debug: bool = False
    log_level: str = "INFO"

    # Medium
    sound_speed: float = Field(300.0, description="m/s")

    # Spectral processing
    harmonics: int = Field(200, description="M, harmonics per axis")
    windowed: bool = True
    margin_factor: float = 3.0

    # Linear-array processing
    l_max: int = 1
    taper_bins: int = Field(2, description="Cutoff taper width in units of dkx")
    aperture_stride: int = Field(3, ge=1, description="Elements between subarray starts")

    # Far-field criteria
    fresnel_warn: float = 3.0

    # Scenario synthesis
    synth_seed: int = 20190601
    scan_gain_jitter: bool = True

    model_config = SettingsConfigDict(
        env_prefix="FARFIELD_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
        yaml_file=DEFAULT_CONFIG_FILE,
    )

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, v: str) -> str:
        if v.upper() not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"unknown log level {v!r}")
        return v.upper()

    @field_validator("sound_speed")
    @classmethod
    def _positive_speed(cls, v: float) -> float:
        if v <= 0:
            raise ValueError("sound_speed must be positive")
        return v

    @field_validator("harmonics")
    @classmethod
    def _even_harmonics(cls, v: int) -> int:
        if v <= 0 or v % 2:
            raise ValueError("harmonics must be a positive even integer")
        return v

    @field_validator("l_max", "taper_bins")
    @classmethod
    def _non_negative(cls, v: int) -> int:
        if v < 0:
            raise ValueError("must be non-negative")
        return v

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: Type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> Tuple[PydanticBaseSettingsSource, ...]:
        return (
            init_settings,
            env_settings,
            dotenv_settings,
            YamlConfigSettingsSource(settings_cls),
        )


def load_settings(config_file: Optional[Path] = None, **overrides) -> Settings:
    """Build settings from an explicit YAML file (CLI --config)"""
    if config_file is None:
        return Settings(**overrides)
    if not Path(config_file).is_file():
        raise ConfigurationError(f"config file not found: {config_file}")

    class _FileSettings(Settings):
        model_config = SettingsConfigDict(yaml_file=Path(config_file))

    return _FileSettings(**overrides)


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance"""
    return Settings()
