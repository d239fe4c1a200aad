"""Configuration management for the secrecy outage bounds toolkit.

This module provides centralized configuration using pydantic-settings,
supporting environment variables and .env file loading. Numerical
tolerances, Monte Carlo defaults and sweep concurrency all live here so
that a run can be retuned without touching code.
"""

from functools import lru_cache

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables.

    Attributes:
        LOG_LEVEL: Root logging level used by the command-line entry point.
        QUAD_EPSABS: Absolute tolerance for adaptive quadrature.
        QUAD_EPSREL: Relative tolerance for adaptive quadrature.
        QUAD_LIMIT: Maximum number of quadrature subintervals.
        ROOT_TAIL_PROBABILITY: Tail mass of Eve's transformed marginal that
            defines the effective minus infinity for root bracketing.
        ROOT_GRID_POINTS: Number of points on the logarithmic bracketing grid.
        ROOT_GRID_DECADES: Decades covered by the bracketing grid towards zero.
        ROOT_XTOL: Absolute tolerance of the stationary point bisection.
        RATE_XTOL: Absolute tolerance on the secrecy rate in rate inversion.
        RATE_MAX_BITS: Secrecy rate beyond which the rate is reported as infinite.
        MC_BLOCK_SIZE: Samples drawn per private generator stream.
        MC_DEFAULT_SAMPLES: Default Monte Carlo sample count.
        MC_DEFAULT_ATOMS: Default number of atoms per axis of a coupling plan.
        MC_DEFAULT_SEED: Default seed for sweeps and verification runs.
        SWEEP_WORKERS: Thread pool size for sweep point evaluation.
        SWEEP_DEFAULT_POINTS: Default number of sweep points.
    """

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    LOG_LEVEL: str = "INFO"

    # Quadrature
    QUAD_EPSABS: float = 1e-12
    QUAD_EPSREL: float = 1e-12
    QUAD_LIMIT: int = 200

    # Stationary point search
    ROOT_TAIL_PROBABILITY: float = 1e-12
    ROOT_GRID_POINTS: int = 600
    ROOT_GRID_DECADES: int = 15
    ROOT_XTOL: float = 1e-12

    # Rate inversion
    RATE_XTOL: float = 1e-12
    RATE_MAX_BITS: float = 64.0

    # Monte Carlo
    MC_BLOCK_SIZE: int = 65_536
    MC_DEFAULT_SAMPLES: int = 100_000
    MC_DEFAULT_ATOMS: int = 10_000
    MC_DEFAULT_SEED: int = 20_200_101

    # Sweeps
    SWEEP_WORKERS: int = 4
    SWEEP_DEFAULT_POINTS: int = 41


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Get cached application settings instance.

    Uses lru_cache to ensure only one Settings instance is created,
    implementing a singleton pattern for configuration access.

    Returns:
        The application Settings instance.
    """
    return Settings()
