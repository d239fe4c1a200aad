"""Inversion of outage curves into epsilon-outage secrecy rates.

Every curve is non-decreasing in R_S, so the largest rate meeting a target
is the crossing point of ε(R_S) = target, bracketed by doubling from
R_S = 1 and refined by bisection.
"""

import logging
import math

from scipy.optimize import bisect

from src.config import get_settings
from src.models import ChannelParams, Direction, RateSolution, ScenarioTag
from src.services.marginals import InvalidParameterError
from src.services.rayleigh import LimitVariant, limit_rs0, outage_probability

logger = logging.getLogger(__name__)

# Secrecy rate standing in for the R_S -> 0 limit when no closed form exists
NUMERIC_LIMIT_RATE = 1e-8


def _curve_at(
    curve: Direction, scenario: ScenarioTag, params: ChannelParams, rate_s: float
) -> float:
    return outage_probability(scenario, curve, params.replace(rate_s=rate_s))


def min_feasible_eps(curve: Direction, scenario: ScenarioTag, params: ChannelParams) -> float:
    """Smallest outage target that admits a positive secrecy rate.

    Args:
        curve: Lower, upper or independent curve.
        scenario: Outage event definition.
        params: Channel parameters; rate_s is ignored.

    Returns:
        lim ε(R_S) as R_S -> 0 from above.
    """
    if scenario in (ScenarioTag.CSIT, ScenarioTag.NOCSIT):
        return limit_rs0(LimitVariant.of(scenario, curve), params)
    return _curve_at(curve, scenario, params, NUMERIC_LIMIT_RATE)


def eps_outage_rate(
    curve: Direction,
    scenario: ScenarioTag,
    params: ChannelParams,
    eps_target: float,
) -> RateSolution:
    """Largest secrecy rate whose outage probability stays at or below a target.

    Args:
        curve: Lower, upper or independent curve.
        scenario: Outage event definition.
        params: Channel parameters; rate_d is held fixed and rate_s is solved for.
        eps_target: Outage target in (0, 1].

    Returns:
        RateSolution. The rate is 0 when the R_S -> 0 limit already exceeds
        the target and ``math.inf`` when the target is met beyond
        ``RATE_MAX_BITS`` (always the case for a target of 1).

    Raises:
        InvalidParameterError: If eps_target lies outside (0, 1].
    """
    if not 0.0 < eps_target <= 1.0:
        raise InvalidParameterError(f"eps_target must lie in (0, 1], got {eps_target}")
    if eps_target == 1.0:
        return RateSolution(rate_s=math.inf, achieved_eps=1.0, iterations=0)

    floor = min_feasible_eps(curve, scenario, params)
    if floor > eps_target:
        logger.debug(f"Limit {floor:.10g} exceeds target {eps_target}, rate is zero")
        return RateSolution(rate_s=0.0, achieved_eps=floor, iterations=0)

    settings = get_settings()

    def excess(rate: float) -> float:
        return _curve_at(curve, scenario, params, rate) - eps_target

    lo, hi = 0.0, 1.0
    while excess(hi) <= 0.0:
        lo, hi = hi, 2.0 * hi
        if hi > settings.RATE_MAX_BITS:
            logger.info(
                f"Target {eps_target} still met at R_S={lo:g}, reporting an unbounded rate"
            )
            return RateSolution(rate_s=math.inf, achieved_eps=eps_target, iterations=0)
        logger.debug(f"Growing rate bracket to [{lo:g}, {hi:g}]")

    if excess(lo) > 0.0:
        # Limit and curve disagree by rounding right at the target.
        return RateSolution(rate_s=0.0, achieved_eps=excess(lo) + eps_target, iterations=0)

    root, info = bisect(excess, lo, hi, xtol=settings.RATE_XTOL, full_output=True)
    achieved = excess(root) + eps_target

    for probe in (0.5 * root, lo):
        if excess(probe) + eps_target > achieved + 1e-12:
            logger.warning(
                f"Outage curve {scenario.value}/{curve.value} is not monotone near "
                f"R_S={root:.6g}; the rate may not be the largest feasible one"
            )
            break

    return RateSolution(rate_s=float(root), achieved_eps=achieved, iterations=info.iterations)
