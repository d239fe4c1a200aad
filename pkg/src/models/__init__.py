"""Domain models for the secrecy outage bounds toolkit."""

from .channel import (
    BoundBranch,
    ChannelParams,
    CopulaKind,
    Direction,
    ScenarioTag,
    db_to_linear,
    linear_to_db,
)
from .results import BoundResult, MCEstimate, RateSolution
from .sweep import MonteCarloSpec, SweepSpec, SweepVariable

__all__ = [
    "BoundBranch",
    "BoundResult",
    "ChannelParams",
    "CopulaKind",
    "Direction",
    "MCEstimate",
    "MonteCarloSpec",
    "RateSolution",
    "ScenarioTag",
    "SweepSpec",
    "SweepVariable",
    "db_to_linear",
    "linear_to_db",
]
