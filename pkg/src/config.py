"""
Configuration management for the proximal Voronoi toolkit.

This module provides a centralized configuration class that loads settings from
environment variables (prefix ``VORONOI_``) and an optional ``.env`` file, using
Pydantic for validation and type safety. Command-line flags override these
values per invocation.
"""

import os
from typing import Optional
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict
import logging

logger = logging.getLogger(__name__)


class Settings(BaseSettings):
    """
    Application settings loaded from environment variables.

    All settings are validated using Pydantic and can be loaded from:
    - Environment variables (VORONOI_TOLERANCE, VORONOI_LOG_LEVEL, ...)
    - .env files (via python-dotenv)
    - Default values where specified
    """

    # Geometry
    tolerance: float = Field(
        default=1e-9,
        gt=0,
        lt=1e-3,
        description="Merge/orientation tolerance relative to the bounding-box diagonal"
    )
    bbox_margin: float = Field(
        default=0.2,
        gt=0,
        le=10,
        description="Default bounding box slack as a fraction of the tight-bounds diagonal"
    )
    workers: int = Field(
        default=1,
        ge=1,
        le=64,
        description="Threads used to build Voronoi cells"
    )

    # Lloyd iteration
    lloyd_max_iters: int = Field(
        default=500,
        ge=1,
        le=100000,
        description="Maximum number of Lloyd steps"
    )
    lloyd_movement_tol: float = Field(
        default=1e-6,
        gt=0,
        description="Stop when the largest site displacement is at most this value"
    )

    # Oracle checks
    check_grid_resolution: int = Field(
        default=200,
        ge=2,
        le=4000,
        description="Grid points per axis for the nearest-site oracle"
    )
    check_samples: int = Field(
        default=1000,
        ge=1,
        description="Random samples drawn by the sampled checks"
    )
    random_seed: int = Field(
        default=0,
        ge=0,
        description="Seed for randomized checks"
    )

    # Topology
    topology_max_families: int = Field(
        default=1024,
        ge=2,
        le=1_000_000,
        description="Largest Leader topology closure built before giving up"
    )

    # Rendering
    svg_width: int = Field(
        default=800,
        ge=16,
        le=20000,
        description="Pixel width of rendered SVG documents"
    )

    log_level: str = Field(
        default="INFO",
        description="Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)"
    )

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate log level is one of the standard Python logging levels."""
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        v_upper = v.upper()
        if v_upper not in valid_levels:
            raise ValueError(
                f"log_level must be one of {valid_levels}, got '{v}'"
            )
        return v_upper

    model_config = SettingsConfigDict(
        env_prefix="VORONOI_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )


# Global settings instance
_settings: Optional[Settings] = None


def get_settings(force_reload: bool = False) -> Settings:
    """
    Get the application settings singleton.

    Args:
        force_reload: If True, reload settings from environment/files

    Returns:
        Settings: The application settings instance

    Example:
        >>> settings = get_settings()
        >>> print(settings.tolerance)
    """
    global _settings

    if _settings is None or force_reload:
        from dotenv import load_dotenv
        load_dotenv()

        _settings = Settings()
        logger.debug(f"Settings loaded: tolerance={_settings.tolerance:g}, workers={_settings.workers}")

    return _settings


def load_settings_from_file(file_path: str) -> Settings:
    """
    Load settings from a specific .env file.

    Args:
        file_path: Path to the .env file

    Returns:
        Settings: The application settings instance

    Example:
        >>> settings = load_settings_from_file("config/precise.env")
    """
    from dotenv import load_dotenv

    if not os.path.exists(file_path):
        raise FileNotFoundError(f"Settings file not found: {file_path}")

    load_dotenv(file_path, override=True)
    return Settings()
