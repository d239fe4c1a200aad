"""Sweep definition models."""

from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.models.channel import ChannelParams, ScenarioTag, db_to_linear


class SweepVariable(str, Enum):
    """Quantity varied along a sweep."""

    SNR_BOB_DB = "snr_bob_db"
    SNR_EVE_DB = "snr_eve_db"
    EPS_TARGET = "eps_target"
    RATE_S = "rate_s"

    @property
    def column(self) -> str:
        """Header name of the sweep column in result files."""
        return _COLUMN_NAMES[self]


_COLUMN_NAMES = {
    SweepVariable.SNR_BOB_DB: "snr",
    SweepVariable.SNR_EVE_DB: "snr_eve",
    SweepVariable.EPS_TARGET: "eps",
    SweepVariable.RATE_S: "rs",
}


class MonteCarloSpec(BaseModel):
    """Monte Carlo companion columns of a sweep.

    Attributes:
        n_samples: Draws per sweep point and curve.
        seed: Root seed; point ``i`` uses stream ``(seed, i)``. Required for sweeps.
        n_atoms: Atoms per axis of the achieving coupling plans.
    """

    model_config = ConfigDict(frozen=True)

    n_samples: int = Field(default=100_000, ge=1_000)
    seed: int | None = None
    n_atoms: int = Field(default=10_000, ge=100)


class SweepSpec(BaseModel):
    """A one-dimensional parameter sweep.

    Attributes:
        variable: Quantity varied along the sweep.
        start: First sweep value.
        stop: Last sweep value (inclusive).
        points: Number of equally spaced sweep values.
        fixed: Parameters held constant; the swept field is overwritten per point.
        scenario: Outage event definition.
        mc: Optional Monte Carlo columns.
        events: Add Pr(E2) and Pr(E3) columns.
    """

    model_config = ConfigDict(frozen=True)

    variable: SweepVariable
    start: float
    stop: float
    points: int = Field(default=41, ge=2)
    fixed: ChannelParams
    scenario: ScenarioTag = ScenarioTag.CSIT
    mc: MonteCarloSpec | None = None
    events: bool = False

    @model_validator(mode="after")
    def _check_range(self) -> "SweepSpec":
        if not self.start < self.stop:
            raise ValueError(f"start must be below stop, got {self.start} >= {self.stop}")
        if self.variable is SweepVariable.RATE_S and self.start < 0:
            raise ValueError(f"rate_s sweep must start at a non-negative rate, got {self.start}")
        if self.variable is SweepVariable.EPS_TARGET and not (0 < self.start and self.stop <= 1):
            raise ValueError(
                f"eps_target sweep must lie in (0, 1], got [{self.start}, {self.stop}]"
            )
        return self

    def values(self) -> np.ndarray:
        """Sweep values in ascending order."""
        return np.linspace(self.start, self.stop, self.points)

    def params_at(self, value: float) -> ChannelParams:
        """Channel parameters at one sweep value.

        For ``eps_target`` sweeps the fixed parameters are returned unchanged.
        """
        if self.variable is SweepVariable.SNR_BOB_DB:
            return self.fixed.replace(rho_x=db_to_linear(value))
        if self.variable is SweepVariable.SNR_EVE_DB:
            return self.fixed.replace(rho_y=db_to_linear(value))
        if self.variable is SweepVariable.RATE_S:
            return self.fixed.replace(rate_s=value)
        return self.fixed
