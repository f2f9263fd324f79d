"""
Configuration management for amdiqkd.

Uses pydantic-settings for environment variable parsing and validation.
Physical defaults live in src.core.constants; these settings cover runtime
behaviour (logging, tracing, worker pool, verification tolerances).
"""

from functools import lru_cache
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class TelemetrySettings(BaseSettings):
    """Telemetry configuration."""

    model_config = SettingsConfigDict(env_prefix="TELEMETRY_")

    # OpenTelemetry (for tracing long sweeps)
    otel_enabled: bool = False
    otel_service_name: str = "amdiqkd"
    otel_exporter_endpoint: str = "http://localhost:4317"
    otel_exporter_type: Literal["otlp", "console", "none"] = "none"


class NumericsSettings(BaseSettings):
    """Evaluation and worker-pool configuration."""

    model_config = SettingsConfigDict(env_prefix="NUMERICS_")

    threads: int = Field(default=1, ge=1)
    oracle_max_n_max: int = Field(default=2, ge=1)
    exact_binomial_limit: int = Field(default=60, ge=1)


class VerifySettings(BaseSettings):
    """Defaults for oracle-vs-closed-form verification runs."""

    model_config = SettingsConfigDict(env_prefix="VERIFY_")

    points: int = Field(default=50, ge=1)
    seed: int = 20240917
    abs_tol: float = Field(default=1e-9, gt=0)
    rel_tol: float = Field(default=1e-6, gt=0)
    unit_tol: float = Field(default=1e-12, gt=0)


class Settings(BaseSettings):
    """Main application settings."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Application info
    app_name: str = "amdiqkd"
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "WARNING"
    log_format: Literal["console", "json"] = "console"

    # Sub-configurations
    telemetry: TelemetrySettings = Field(default_factory=TelemetrySettings)
    numerics: NumericsSettings = Field(default_factory=NumericsSettings)
    verify: VerifySettings = Field(default_factory=VerifySettings)


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


# Global settings instance
settings = get_settings()
