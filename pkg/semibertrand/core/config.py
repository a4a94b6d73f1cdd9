"""Application configuration."""
from typing import Any, Dict

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # Project Info
    PROJECT_NAME: str = "Semi-Euclidean Bertrand Toolkit"
    VERSION: str = "0.1.0"

    # Sampling
    GRID_SIZE: int = 512
    SYNTH_STEP: float = 1e-3
    REPARAM_STEP: float = 1e-3
    ARCLENGTH_PANELS: int = 512
    TIMELIKE_CHECK_POINTS: int = 1025

    # Frame integration
    PROJECTION_INTERVAL: int = 16
    DRIFT_LIMIT: float = 1e-6

    # Vector algebra thresholds
    NULL_TOL: float = 1e-12
    DEGENERACY_TOL: float = 1e-10
    RANK_TOL: float = 1e-12

    # Sampled-mode differentiation
    FD_STEP: float = 0.02
    RICHARDSON_LEVELS: int = 3

    # Bertrand conditions
    TOL_EQ: float = 1e-8
    TOL_MARGIN: float = 1e-6
    CLASSICAL_FIT_TOL: float = 1e-8
    FAMILY_ALPHA: float = 1.0
    MATE_SPEED_TOL: float = 1e-10
    RANK_RATIO: float = 1e-8

    # Reports
    REPORT_DIGITS: int = 17

    # Logging
    LOG_LEVEL: str = "INFO"

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="SEMIBERTRAND_",
        case_sensitive=True,
        extra="ignore",
    )

    @field_validator(
        "SYNTH_STEP",
        "REPARAM_STEP",
        "DRIFT_LIMIT",
        "NULL_TOL",
        "DEGENERACY_TOL",
        "RANK_TOL",
        "FD_STEP",
        "TOL_EQ",
        "TOL_MARGIN",
        "CLASSICAL_FIT_TOL",
        "MATE_SPEED_TOL",
        "RANK_RATIO",
    )
    @classmethod
    def check_positive(cls, v: float) -> float:
        if v <= 0:
            raise ValueError("must be positive")
        return v

    @field_validator("GRID_SIZE")
    @classmethod
    def check_grid_size(cls, v: int) -> int:
        if v < 16:
            raise ValueError("grid size must be at least 16")
        return v

    @field_validator("PROJECTION_INTERVAL", "RICHARDSON_LEVELS", "ARCLENGTH_PANELS", "REPORT_DIGITS")
    @classmethod
    def check_count(cls, v: int) -> int:
        if v < 1:
            raise ValueError("must be at least 1")
        return v

    @field_validator("TIMELIKE_CHECK_POINTS")
    @classmethod
    def check_dense_grid(cls, v: int) -> int:
        if v < 3:
            raise ValueError("timelike check grid needs at least 3 points")
        return v


# Create settings instance
settings = Settings()


# Logging configuration
LOGGING_CONFIG: Dict[str, Any] = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "default": {
            "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        },
        "console": {
            "format": "%(name)s - %(message)s",
            "datefmt": "[%X]",
        },
    },
    "handlers": {
        "default": {
            "formatter": "default",
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stderr",
        },
        "console": {
            "formatter": "console",
            "class": "rich.logging.RichHandler",
            "show_path": False,
            "rich_tracebacks": False,
        },
    },
    "root": {
        "level": "WARNING",
        "handlers": ["default"],
    },
    "loggers": {
        "semibertrand": {
            "level": settings.LOG_LEVEL,
            "handlers": ["console"],
            "propagate": False,
        },
    },
}
