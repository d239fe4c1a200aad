"""Channel parameter model and the enumerations shared across services."""

import math
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator

# Largest R_S + R_d for which 2^(R_S + R_d) stays finite in double precision
MAX_TOTAL_RATE_BITS = 1000.0


class ScenarioTag(str, Enum):
    """Outage event definition under study.

    CSIT counts only the secrecy event x̃ + ỹ < s. NOCSIT adds Bob failing to
    decode the total rate (x̃ < t). The ALT variants replace the secrecy event
    by Eve decoding the dummy part (ỹ < s - t).
    """

    CSIT = "csit"
    NOCSIT = "nocsit"
    ALT_CSIT = "alt-csit"
    ALT_NOCSIT = "alt-nocsit"


class Direction(str, Enum):
    """Which outage curve is requested."""

    LOWER = "lower"
    UPPER = "upper"
    INDEPENDENT = "indep"


class BoundBranch(str, Enum):
    """Candidate that decided a bound."""

    TRIVIAL_BOUNDARY = "trivial_boundary"
    STATIONARY_INTERIOR = "stationary_interior"
    SATURATED_ONE = "saturated_one"


class CopulaKind(str, Enum):
    """Fréchet-Hoeffding extremal copulas and the independence copula."""

    FRECHET_LOWER_W = "W"
    FRECHET_UPPER_M = "M"
    PRODUCT_PI = "Pi"


def db_to_linear(value_db: float) -> float:
    """Convert a power ratio from decibels to linear scale."""
    return 10.0 ** (value_db / 10.0)


def linear_to_db(value: float) -> float:
    """Convert a positive linear power ratio to decibels."""
    return 10.0 * math.log10(value)


class ChannelParams(BaseModel):
    """Full experiment configuration of a Rayleigh wiretap link.

    SNRs are linear; use ``from_db`` at the edges where decibels are given.

    Attributes:
        lambda_x: Inverse mean of Bob's channel gain.
        lambda_y: Inverse mean of Eve's channel gain.
        rho_x: Bob's receiver SNR (linear).
        rho_y: Eve's receiver SNR (linear).
        rate_s: Secrecy rate in bits per channel use.
        rate_d: Dummy rate in bits per channel use.
    """

    model_config = ConfigDict(frozen=True)

    lambda_x: float = Field(gt=0, allow_inf_nan=False)
    lambda_y: float = Field(gt=0, allow_inf_nan=False)
    rho_x: float = Field(gt=0, allow_inf_nan=False)
    rho_y: float = Field(gt=0, allow_inf_nan=False)
    rate_s: float = Field(default=0.0, ge=0, allow_inf_nan=False)
    rate_d: float = Field(default=0.0, ge=0, allow_inf_nan=False)

    @model_validator(mode="after")
    def _check_total_rate(self) -> "ChannelParams":
        total = self.rate_s + self.rate_d
        if total > MAX_TOTAL_RATE_BITS:
            raise ValueError(
                f"rate_s + rate_d must not exceed {MAX_TOTAL_RATE_BITS:g} bits, got {total:g}"
            )
        return self

    @classmethod
    def from_db(
        cls,
        snr_bob_db: float,
        snr_eve_db: float,
        lambda_x: float = 1.0,
        lambda_y: float = 1.0,
        rate_s: float = 0.0,
        rate_d: float = 0.0,
    ) -> "ChannelParams":
        """Build parameters from receiver SNRs given in dB."""
        return cls(
            lambda_x=lambda_x,
            lambda_y=lambda_y,
            rho_x=db_to_linear(snr_bob_db),
            rho_y=db_to_linear(snr_eve_db),
            rate_s=rate_s,
            rate_d=rate_d,
        )

    @property
    def s(self) -> float:
        """Secrecy threshold 2^R_S - 1."""
        return 2.0**self.rate_s - 1.0

    @property
    def t(self) -> float:
        """Decoding threshold 2^(R_d + R_S) - 1."""
        return 2.0 ** (self.rate_d + self.rate_s) - 1.0

    def replace(self, **changes: float) -> "ChannelParams":
        """Return a validated copy with some fields changed."""
        return type(self)(**{**self.model_dump(), **changes})
