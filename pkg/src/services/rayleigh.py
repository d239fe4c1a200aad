"""Closed-form bounds for Rayleigh fading (exponential channel gains).

With exponential gains X̃ is exponential with rate λ̃x = λx/ρx and -Ỹ is
exponential with rate λ̃y = λy/(2^R_S·ρy), and the single stationary point
has the closed form

    ỹ* = (λ̃x·s + log(λ̃y/λ̃x)) / (λ̃x - λ̃y).

Alongside the bounds this module holds the regime conditions (Eve SNR
threshold, sufficient secrecy rate), the R_S -> 0 limits and the diversity
gain estimate.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum

import numpy as np

from src.models import ChannelParams, Direction, ScenarioTag, db_to_linear, linear_to_db
from src.services.bounds_core import ConfigurationError, outage_curve
from src.services.marginals import (
    Axis,
    InvalidParameterError,
    TransformedPair,
    exponential_marginal,
    transform,
)

logger = logging.getLogger(__name__)

# Smallest span and point count of a diversity grid
DIVERSITY_MIN_SPAN_DB = 20.0
DIVERSITY_MIN_POINTS = 5


class UnsupportedScenarioError(ValueError):
    """Exception raised when no closed form exists for the requested scenario."""

    pass


class NonIdentifiableError(ArithmeticError):
    """Exception raised when a diversity slope cannot be estimated.

    This happens when the outage curve is saturated at one (or vanishes)
    across the whole grid, so its logarithm carries no slope information.
    """

    pass


class LimitVariant(str, Enum):
    """Curve whose R_S -> 0 limit is requested."""

    CSIT_LOWER = "csit_lower"
    CSIT_UPPER = "csit_upper"
    CSIT_INDEPENDENT = "csit_independent"
    NOCSIT_LOWER = "nocsit_lower"
    NOCSIT_UPPER = "nocsit_upper"
    NOCSIT_INDEPENDENT = "nocsit_independent"

    @classmethod
    def of(cls, scenario: ScenarioTag, direction: Direction) -> "LimitVariant":
        """Variant for a (scenario, direction) pair.

        Raises:
            UnsupportedScenarioError: For the alternative outage events.
        """
        names = {
            (ScenarioTag.CSIT, Direction.LOWER): cls.CSIT_LOWER,
            (ScenarioTag.CSIT, Direction.UPPER): cls.CSIT_UPPER,
            (ScenarioTag.CSIT, Direction.INDEPENDENT): cls.CSIT_INDEPENDENT,
            (ScenarioTag.NOCSIT, Direction.LOWER): cls.NOCSIT_LOWER,
            (ScenarioTag.NOCSIT, Direction.UPPER): cls.NOCSIT_UPPER,
            (ScenarioTag.NOCSIT, Direction.INDEPENDENT): cls.NOCSIT_INDEPENDENT,
        }
        try:
            return names[(scenario, direction)]
        except KeyError as e:
            raise UnsupportedScenarioError(
                f"No analytic R_S -> 0 limit for {scenario.value}"
            ) from e


@dataclass(frozen=True)
class RayleighRates:
    """Scale parameters of the transformed exponential pair.

    Attributes:
        lt_x: λ̃x = λx/ρx.
        lt_y: λ̃y = λy/(2^R_S·ρy).
        s: Secrecy threshold.
        t: Decoding threshold, at least s.
    """

    lt_x: float
    lt_y: float
    s: float
    t: float

    def __post_init__(self) -> None:
        if not (self.lt_x > 0 and self.lt_y > 0):
            raise InvalidParameterError(
                f"Rates must be positive, got lt_x={self.lt_x}, lt_y={self.lt_y}"
            )
        if self.s < 0 or self.t < self.s:
            raise InvalidParameterError(f"Need 0 <= s <= t, got s={self.s}, t={self.t}")

    @classmethod
    def from_params(cls, params: ChannelParams) -> "RayleighRates":
        return cls(
            lt_x=params.lambda_x / params.rho_x,
            lt_y=params.lambda_y / (2.0**params.rate_s * params.rho_y),
            s=params.s,
            t=params.t,
        )

    def to_pair(self) -> TransformedPair:
        """Equivalent transformed pair for the generic engine."""
        return TransformedPair(
            xt=exponential_marginal(self.lt_x, Axis.POSITIVE),
            yt=exponential_marginal(self.lt_y, Axis.NEGATIVE),
            s=self.s,
            t=self.t,
        )


def ystar(r: RayleighRates) -> float | None:
    """Closed-form stationary point, or None when λ̃x = λ̃y."""
    if r.lt_x == r.lt_y:
        return None
    return (r.lt_x * r.s + math.log(r.lt_y / r.lt_x)) / (r.lt_x - r.lt_y)


def _g(r: RayleighRates, y: float) -> float:
    return math.exp(r.lt_y * y) - math.exp(r.lt_x * (y - r.s))


def _h(r: RayleighRates, y: float) -> float:
    return math.exp(r.lt_y * y) - math.expm1(r.lt_x * (y - r.s))


def _clamp(value: float) -> float:
    return min(max(value, 0.0), 1.0)


def closed_bound(scenario: ScenarioTag, direction: Direction, r: RayleighRates) -> float:
    """Closed-form lower, upper or independent outage probability.

    The λ̃x = λ̃y knife edge, where the closed form divides by zero, is
    evaluated by the generic engine instead.

    Args:
        scenario: CSIT or NOCSIT.
        direction: Requested curve.
        r: Transformed rates and thresholds.

    Returns:
        Outage probability in [0, 1].

    Raises:
        UnsupportedScenarioError: For the alternative outage events.
    """
    if scenario not in (ScenarioTag.CSIT, ScenarioTag.NOCSIT):
        raise UnsupportedScenarioError(
            f"No closed form for {scenario.value}; use bounds_core.bound"
        )
    lx, ly, s, t = r.lt_x, r.lt_y, r.s, r.t
    gap = s - t
    y0 = ystar(r)

    if direction is Direction.INDEPENDENT:
        if scenario is ScenarioTag.CSIT:
            return _clamp((lx - ly * math.expm1(-lx * s)) / (lx + ly))
        return _clamp(-math.expm1(-lx * t) + lx * math.exp(ly * gap - lx * t) / (lx + ly))

    if y0 is None:
        logger.debug("Equal transformed rates, routing to the generic engine")
        return outage_curve(scenario, direction, r.to_pair())

    if scenario is ScenarioTag.CSIT:
        if direction is Direction.LOWER:
            if ly < lx * math.exp(-lx * s):
                return _clamp(_g(r, y0))
            return _clamp(-math.expm1(-lx * s))
        if lx >= ly:
            return 1.0
        return _clamp(_h(r, y0))

    if direction is Direction.LOWER:
        return _clamp(max(_g(r, min(y0, gap)), -math.expm1(-lx * t)))
    if ly > lx:
        return _clamp(_h(r, min(y0, gap)))
    return 1.0


def outage_probability(
    scenario: ScenarioTag, direction: Direction, params: ChannelParams
) -> float:
    """Outage curve value for Rayleigh parameters.

    Uses the closed forms where they exist and the generic engine for the
    alternative outage events.
    """
    if scenario in (ScenarioTag.CSIT, ScenarioTag.NOCSIT):
        return closed_bound(scenario, direction, RayleighRates.from_params(params))
    return outage_curve(scenario, direction, transform(params))


def eve_snr_threshold(lambda_x: float, lambda_y: float, rho_x: float, rate_s: float) -> float:
    """Eve SNR (linear) below which the CSIT lower bound equals F_X̃(s).

    Args:
        lambda_x: Inverse mean of Bob's gain.
        lambda_y: Inverse mean of Eve's gain.
        rho_x: Bob's linear SNR.
        rate_s: Secrecy rate.

    Returns:
        (λy/λx)·(ρx/2^R_S)·exp((λx/ρx)(2^R_S - 1)).
    """
    for name, value in (("lambda_x", lambda_x), ("lambda_y", lambda_y), ("rho_x", rho_x)):
        if not value > 0:
            raise InvalidParameterError(f"{name} must be positive, got {value}")
    if rate_s < 0:
        raise InvalidParameterError(f"rate_s must be non-negative, got {rate_s}")
    spread = 2.0**rate_s
    return (lambda_y / lambda_x) * (rho_x / spread) * math.exp((lambda_x / rho_x) * (spread - 1.0))


def eve_snr_threshold_db(
    lambda_x: float, lambda_y: float, snr_bob_db: float, rate_s: float
) -> float:
    """``eve_snr_threshold`` with Bob's SNR given and the result returned in dB."""
    return linear_to_db(eve_snr_threshold(lambda_x, lambda_y, db_to_linear(snr_bob_db), rate_s))


def high_snr_threshold_db(
    lambda_x: float, lambda_y: float, snr_bob_db: float, rate_s: float
) -> float:
    """High-SNR approximation ρy[dB] < ρx[dB] - 10·log10(2)·R_S (+ the λ ratio in dB)."""
    return snr_bob_db - 10.0 * math.log10(2.0) * rate_s + linear_to_db(lambda_y / lambda_x)


def rs_sufficient_bound(lambda_x: float, lambda_y: float, rho_x: float, rho_y: float) -> float:
    """Secrecy rate below which the CSIT lower bound is guaranteed to be F_X̃(s).

    May be zero or negative, meaning no positive rate qualifies.
    """
    return math.log2((lambda_y / lambda_x) * (rho_x / rho_y))


def limit_rs0(variant: LimitVariant, params: ChannelParams) -> float:
    """Analytic limit of an outage curve as R_S -> 0.

    Args:
        variant: Scenario and curve.
        params: Channel parameters; rate_s is ignored and rate_d is used by
            the NOCSIT variants.

    Returns:
        The limit probability.
    """
    lx = params.lambda_x / params.rho_x
    ly = params.lambda_y / params.rho_y
    t0 = 2.0**params.rate_d - 1.0
    y0 = math.log(ly / lx) / (lx - ly) if lx != ly else None

    def g0(y: float) -> float:
        return math.exp(ly * y) - math.exp(lx * y)

    def h0(y: float) -> float:
        return math.exp(ly * y) - math.expm1(lx * y)

    if variant is LimitVariant.CSIT_LOWER:
        return _clamp(g0(y0)) if ly < lx else 0.0
    if variant is LimitVariant.CSIT_UPPER:
        return 1.0 if lx >= ly else _clamp(h0(y0))
    if variant is LimitVariant.CSIT_INDEPENDENT:
        return lx / (lx + ly)

    decode_fail = -math.expm1(-lx * t0)
    if variant is LimitVariant.NOCSIT_LOWER:
        if y0 is None:
            return decode_fail
        return _clamp(max(g0(min(y0, -t0)), decode_fail))
    if variant is LimitVariant.NOCSIT_UPPER:
        return _clamp(h0(min(y0, -t0))) if ly > lx else 1.0
    return _clamp(decode_fail + lx * math.exp(-(lx + ly) * t0) / (lx + ly))


def diversity_estimate(
    scenario: ScenarioTag,
    direction: Direction,
    params: ChannelParams,
    snr_grid_db: Sequence[float],
) -> float:
    """Least-squares slope of -log ε against log ρx over the top half of the grid.

    Args:
        scenario: Outage event definition.
        direction: Requested curve.
        params: Channel parameters; rho_x is overwritten by the grid.
        snr_grid_db: Ascending Bob SNRs in dB, spanning at least 20 dB with
            at least 5 points.

    Returns:
        Estimated diversity gain.

    Raises:
        ConfigurationError: If the grid is too short or not ascending.
        NonIdentifiableError: If the curve is saturated or zero on the grid.
    """
    grid = np.asarray(snr_grid_db, dtype=float)
    if grid.size < DIVERSITY_MIN_POINTS or grid[-1] - grid[0] < DIVERSITY_MIN_SPAN_DB:
        raise ConfigurationError(
            f"Diversity grid needs >= {DIVERSITY_MIN_POINTS} points spanning "
            f">= {DIVERSITY_MIN_SPAN_DB} dB"
        )
    if np.any(np.diff(grid) <= 0):
        raise ConfigurationError("Diversity grid must be strictly ascending")

    eps = np.array(
        [
            outage_probability(scenario, direction, params.replace(rho_x=db_to_linear(v)))
            for v in grid
        ]
    )
    if np.all(eps >= 1.0 - 1e-12):
        raise NonIdentifiableError("Outage curve is saturated at one across the grid")

    top = slice(grid.size // 2, None)
    if np.any(eps[top] <= 0.0):
        raise NonIdentifiableError("Outage curve vanishes on the grid, log undefined")

    log_rho = grid[top] * math.log(10.0) / 10.0
    slope = np.polyfit(log_rho, -np.log(eps[top]), 1)[0]
    logger.debug(f"Diversity of {scenario.value}/{direction.value}: {slope:.4f}")
    return float(slope)
