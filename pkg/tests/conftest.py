"""Pytest fixtures for the secrecy outage bounds tests.

This module provides shared fixtures for settings isolation and the
recurring reference channel setups.
"""

from unittest.mock import patch

import pytest

from src.config import Settings
from src.models import ChannelParams
from src.services.marginals import TransformedPair
from src.services.rayleigh import RayleighRates


@pytest.fixture(scope="session")
def test_settings() -> Settings:
    """Create a Settings object with test environment variables.

    Returns:
        Settings: A Settings instance with smaller Monte Carlo blocks so that
        multi-block code paths are exercised by moderate sample counts.
    """
    with patch.dict(
        "os.environ",
        {
            "LOG_LEVEL": "DEBUG",
            "MC_BLOCK_SIZE": "8192",
            "SWEEP_WORKERS": "2",
        },
    ):
        # Clear the lru_cache to ensure fresh settings are created
        from src.config import get_settings

        get_settings.cache_clear()
        settings = Settings()
        yield settings
        # Clear cache again after test session
        get_settings.cache_clear()


@pytest.fixture
def csit_params() -> ChannelParams:
    """CSIT reference setup: λx = λy = 1, ρx = ρy = 0 dB, R_S = 0.1."""
    return ChannelParams.from_db(0.0, 0.0, rate_s=0.1)


@pytest.fixture
def nocsit_params() -> ChannelParams:
    """NoCSIT reference setup: λx = λy = 1, ρx = ρy = 0 dB, R_S = 0.1, R_d = 1."""
    return ChannelParams.from_db(0.0, 0.0, rate_s=0.1, rate_d=1.0)


@pytest.fixture
def rate_params() -> ChannelParams:
    """Rate inversion setup: λx = λy = 1, ρx = 5 dB, ρy = 0 dB."""
    return ChannelParams.from_db(5.0, 0.0)


@pytest.fixture
def nocsit_pair(nocsit_params: ChannelParams) -> TransformedPair:
    """Transformed pair of the NoCSIT reference setup."""
    return RayleighRates.from_params(nocsit_params).to_pair()


@pytest.fixture
def make_pair():
    """Factory for exponential transformed pairs from (λ̃x, λ̃y, s, t).

    Returns:
        Callable building a TransformedPair; t defaults to s.
    """

    def _make(lt_x: float, lt_y: float, s: float, t: float | None = None) -> TransformedPair:
        return RayleighRates(lt_x=lt_x, lt_y=lt_y, s=s, t=s if t is None else t).to_pair()

    return _make
