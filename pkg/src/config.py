from pathlib import Path
from typing import Literal

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

PROJECT_ROOT = Path(__file__).parent.parent
ENV_FILE_PATH = PROJECT_ROOT / ".env"


class BaseConfigSettings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=[".env", str(ENV_FILE_PATH)],
        extra="ignore",
        frozen=True,
        env_nested_delimiter="__",
        case_sensitive=False,
    )


class FockSettings(BaseConfigSettings):
    model_config = SettingsConfigDict(
        env_file=[".env", str(ENV_FILE_PATH)],
        env_prefix="FOCK__",
        extra="ignore",
        frozen=True,
        case_sensitive=False,
    )

    max_dimension: int = Field(default=10_000_000, ge=1)  # basis states per ModeSpace


class ValiditySettings(BaseConfigSettings):
    model_config = SettingsConfigDict(
        env_file=[".env", str(ENV_FILE_PATH)],
        env_prefix="VALIDITY__",
        extra="ignore",
        frozen=True,
        case_sensitive=False,
    )

    threshold: float = 0.1  # ratio above which a "much less than" condition fails

    @field_validator("threshold")
    @classmethod
    def validate_threshold(cls, v: float) -> float:
        if not 0.0 < v < 1.0:
            raise ValueError("Validity threshold must lie in (0, 1)")
        return v


class PropagatorSettings(BaseConfigSettings):
    model_config = SettingsConfigDict(
        env_file=[".env", str(ENV_FILE_PATH)],
        env_prefix="PROPAGATOR__",
        extra="ignore",
        frozen=True,
        case_sensitive=False,
    )

    method: Literal["dense", "krylov"] = "dense"
    time_step: float = Field(default=1.0, gt=0.0)  # in 1/g13
    krylov_dim: int = Field(default=30, ge=2)
    tolerance: float = Field(default=1e-10, gt=0.0)
    hermiticity_tolerance: float = Field(default=1e-12, gt=0.0)  # relative to max |H_ij|


class SweepSettings(BaseConfigSettings):
    model_config = SettingsConfigDict(
        env_file=[".env", str(ENV_FILE_PATH)],
        env_prefix="SWEEP__",
        extra="ignore",
        frozen=True,
        case_sensitive=False,
    )

    omega_min: float = 10.0  # Omega / g13
    omega_max: float = 1000.0
    n_points: int = 200
    log_spaced: bool = True
    t_max: float = 600.0  # 1/g13
    n_samples: int = 600
    max_workers: int = 0  # 0 = one per CPU


class MeasureSettings(BaseConfigSettings):
    model_config = SettingsConfigDict(
        env_file=[".env", str(ENV_FILE_PATH)],
        env_prefix="MEASURE__",
        extra="ignore",
        frozen=True,
        case_sensitive=False,
    )

    n_atoms: int = Field(default=1, ge=1, le=2)
    photon_cap: int = Field(default=3, ge=1)
    raman_lambda: float = 1000.0  # Raman Rabi frequency, g13 units
    raman_delta: float = 1.0e5  # detuning from level 3
    ramp_duration: float = 1.0
    ramp_shape: Literal["linear", "cosine"] = "cosine"
    fidelity_target: float = 0.999  # per-atom swap fidelity
    step_tolerance: float = 1e-8  # step-halving control on final-state fidelity


class LoggingSettings(BaseConfigSettings):
    model_config = SettingsConfigDict(
        env_file=[".env", str(ENV_FILE_PATH)],
        env_prefix="LOGGING__",
        extra="ignore",
        frozen=True,
        case_sensitive=False,
    )

    level: str = "INFO"
    json_format: bool = True


class Settings(BaseConfigSettings):
    app_version: str = "0.1.0"
    environment: Literal["development", "staging", "production"] = "development"
    service_name: str = "polariton-bh"
    seed: int = 1234  # randomized cross-validation runs

    fock: FockSettings = Field(default_factory=FockSettings)
    validity: ValiditySettings = Field(default_factory=ValiditySettings)
    propagator: PropagatorSettings = Field(default_factory=PropagatorSettings)
    sweep: SweepSettings = Field(default_factory=SweepSettings)
    measure: MeasureSettings = Field(default_factory=MeasureSettings)
    logging: LoggingSettings = Field(default_factory=LoggingSettings)

    @field_validator("app_version")
    @classmethod
    def validate_version(cls, v: str) -> str:
        if not v.strip():
            raise ValueError("app_version must not be empty")
        return v


def get_settings() -> Settings:
    return Settings()
