"""Distribution-agnostic outage bounds via candidate enumeration.

Every bound is the supremum (lower) or infimum (upper) of a one-dimensional
objective along the boundary of the outage region. The objectives are

    g(ỹ) = F_X̃(s - ỹ) + F_Ỹ(ỹ) - 1     (lower bounds)
    h(ỹ) = F_X̃(s - ỹ) + F_Ỹ(ỹ)         (upper bounds)

and their interior extrema sit at roots of f_Ỹ(ỹ) = f_X̃(s - ỹ). Instead of
classifying each root by curvature, the objective is evaluated at every
root plus the boundary candidates of the scenario and the best one wins.
"""

import logging
import math
from collections.abc import Sequence

import numpy as np
from scipy.integrate import quad
from scipy.optimize import bisect

from src.config import get_settings
from src.models import BoundBranch, BoundResult, CopulaKind, Direction, ScenarioTag
from src.services.copulas import dual_value
from src.services.marginals import TransformedPair

logger = logging.getLogger(__name__)

# Largest absolute quadrature error estimate accepted as converged
QUAD_TOLERANCE = 1e-10

# Slack for the no-eavesdropper-advantage inequality
CONDITION_SLACK = 1e-12

# Quantiles of Ỹ and X̃ that split the independent-curve integral
Y_BREAK_QUANTILES = (1e-12, 1e-6, 0.5)
X_BREAK_QUANTILES = (1e-12, 1e-6, 1e-3, 0.5, 1.0 - 1e-6, 1.0 - 1e-12)


class ConfigurationError(ValueError):
    """Exception raised for requests that do not fit the scenario or the pair.

    Examples are a pair whose marginals live on the wrong half axes, an
    unknown scenario, or an empty probe grid.
    """

    pass


class NumericFailureError(ArithmeticError):
    """Exception raised when a numerical routine does not converge.

    Attributes:
        residual: Error estimate reported by the failing routine.
    """

    def __init__(self, message: str, residual: float = math.nan):
        super().__init__(message)
        self.residual = residual


def lower_objective(pair: TransformedPair, y: float | np.ndarray):
    """g(ỹ) = F_X̃(s - ỹ) + F_Ỹ(ỹ) - 1."""
    y = np.asarray(y, dtype=float)
    return pair.xt.cdf(pair.s - y) + pair.yt.cdf(y) - 1.0


def upper_objective(pair: TransformedPair, y: float | np.ndarray):
    """h(ỹ) = F_X̃(s - ỹ) + F_Ỹ(ỹ)."""
    y = np.asarray(y, dtype=float)
    return pair.xt.cdf(pair.s - y) + pair.yt.cdf(y)


def event_probabilities(pair: TransformedPair) -> tuple[float, float]:
    """Pr(E2) = F_X̃(t) (Bob cannot decode) and Pr(E3) = F_Ỹ(s - t) (Eve decodes dummies)."""
    return float(pair.xt.cdf(pair.t)), float(pair.yt.cdf(pair.gap))


def _check_pair(scenario: ScenarioTag, pair: TransformedPair) -> None:
    if not isinstance(scenario, ScenarioTag):
        raise ConfigurationError(f"Unknown scenario: {scenario!r}")
    if pair.xt.support[0] < 0:
        raise ConfigurationError(f"X̃ must be supported on [0, inf), got {pair.xt.support}")
    if pair.yt.support[1] > 0:
        raise ConfigurationError(f"Ỹ must be supported on (-inf, 0], got {pair.yt.support}")


def _effective_minus_infinity(pair: TransformedPair) -> float:
    return float(pair.yt.quantile(get_settings().ROOT_TAIL_PROBABILITY))


def stationary_points(pair: TransformedPair) -> tuple[float, ...]:
    """Roots ỹ < 0 of f_Ỹ(ỹ) - f_X̃(s - ỹ).

    Sign changes are bracketed on a logarithmic grid over (-Y_MAX, 0), where
    Y_MAX is minus the 1e-12 quantile of Ỹ, and refined by bisection.

    Args:
        pair: Transformed marginals and thresholds.

    Returns:
        Sorted roots; empty when the densities never cross.
    """
    settings = get_settings()
    y_max = -_effective_minus_infinity(pair)
    if not (math.isfinite(y_max) and y_max > 0):
        logger.debug(f"No bracketing range for stationary points (Y_MAX={y_max})")
        return ()

    grid = -np.geomspace(
        y_max, y_max * 10.0 ** (-settings.ROOT_GRID_DECADES), settings.ROOT_GRID_POINTS
    )
    grid = np.append(grid, 0.0)

    def crossing(y):
        return pair.yt.pdf(y) - pair.xt.pdf(pair.s - y)

    values = np.asarray(crossing(grid), dtype=float)
    roots: list[float] = []
    last = len(grid) - 1
    for i in range(last):
        left, right = values[i], values[i + 1]
        if left == 0.0:
            isolated = (i == 0 or values[i - 1] != 0.0) and right != 0.0
            if isolated:
                roots.append(float(grid[i]))
            continue
        if left * right < 0:
            root = bisect(
                lambda y: float(crossing(y)), grid[i], grid[i + 1], xtol=settings.ROOT_XTOL
            )
            if root < 0:
                roots.append(float(root))

    roots.sort()
    logger.debug(f"Stationary points: {roots}")
    return tuple(roots)


def _select(
    candidates: list[tuple[float, float, BoundBranch]], maximize: bool
) -> tuple[float, BoundBranch]:
    best_value, best_branch = candidates[0][1], candidates[0][2]
    for _, value, branch in candidates[1:]:
        better = value > best_value if maximize else value < best_value
        if better:
            best_value, best_branch = value, branch
    return best_value, best_branch


def _assemble(
    candidates: list[tuple[float, float, BoundBranch]],
    maximize: bool,
    stationary: Sequence[float],
) -> BoundResult:
    value, branch = _select(candidates, maximize)
    clamped = min(max(value, 0.0), 1.0)
    if clamped != value:
        logger.warning(f"Clamped bound {value!r} to {clamped}")
        if clamped == 1.0:
            branch = BoundBranch.SATURATED_ONE
    return BoundResult(
        value=clamped,
        branch=branch,
        stationary_points=tuple(stationary),
        candidates=tuple((loc, val) for loc, val, _ in candidates),
    )


def _dual_bound(direction: Direction, pair: TransformedPair) -> BoundResult:
    a, b = event_probabilities(pair)
    if direction is Direction.LOWER:
        value = float(dual_value(CopulaKind.FRECHET_UPPER_M, a, b))
        return BoundResult(
            value=value,
            branch=BoundBranch.TRIVIAL_BOUNDARY,
            candidates=((pair.t, a), (pair.gap, b)),
        )
    value = float(dual_value(CopulaKind.FRECHET_LOWER_W, a, b))
    branch = BoundBranch.SATURATED_ONE if a + b >= 1.0 else BoundBranch.TRIVIAL_BOUNDARY
    return BoundResult(value=value, branch=branch, candidates=((pair.gap, a + b), (math.nan, 1.0)))


def bound(scenario: ScenarioTag, direction: Direction, pair: TransformedPair) -> BoundResult:
    """Best-case (lower) or worst-case (upper) outage over all joint distributions.

    Args:
        scenario: Outage event definition.
        direction: LOWER or UPPER.
        pair: Transformed marginals and thresholds.

    Returns:
        BoundResult with the winning candidate's branch.

    Raises:
        ConfigurationError: If the pair does not fit the scenario or the
            direction is INDEPENDENT.
    """
    _check_pair(scenario, pair)
    if direction is Direction.INDEPENDENT:
        raise ConfigurationError("bound() covers LOWER and UPPER; use independent_outage()")
    if scenario is ScenarioTag.ALT_NOCSIT:
        return _dual_bound(direction, pair)

    s, t, gap = pair.s, pair.t, pair.gap
    f_x_s = float(pair.xt.cdf(s))
    f_x_t = float(pair.xt.cdf(t))
    f_y_gap = float(pair.yt.cdf(gap))
    points = stationary_points(pair)

    trivial = BoundBranch.TRIVIAL_BOUNDARY
    interior = BoundBranch.STATIONARY_INTERIOR
    cap = (math.nan, 1.0, BoundBranch.SATURATED_ONE)

    if scenario is ScenarioTag.CSIT:
        feasible = list(points)
        if direction is Direction.LOWER:
            candidates = [(0.0, f_x_s, trivial), (-math.inf, 0.0, trivial)]
        else:
            candidates = [cap, (-math.inf, 1.0, trivial), (0.0, 1.0 + f_x_s, trivial)]
    elif scenario is ScenarioTag.NOCSIT:
        feasible = [y for y in points if y < gap]
        if direction is Direction.LOWER:
            candidates = [(gap, f_x_t, trivial), (-math.inf, 0.0, trivial)]
        else:
            candidates = [cap, (gap, f_x_t + f_y_gap, trivial)]
    else:
        feasible = [y for y in points if y > gap]
        if direction is Direction.LOWER:
            candidates = [(0.0, f_x_s, trivial), (gap, f_y_gap, trivial)]
        else:
            candidates = [cap, (gap, f_x_t + f_y_gap, trivial)]

    objective = lower_objective if direction is Direction.LOWER else upper_objective
    candidates += [(y, float(objective(pair, y)), interior) for y in feasible]

    result = _assemble(candidates, direction is Direction.LOWER, feasible)
    logger.debug(
        f"{scenario.value}/{direction.value} bound {result.value:.10g} ({result.branch.value})"
    )
    return result


def _integrate(func, lower: float, upper: float, points: Sequence[float] = ()) -> float:
    settings = get_settings()
    inner = sorted({p for p in points if lower < p < upper})
    result = quad(
        func,
        lower,
        upper,
        epsabs=settings.QUAD_EPSABS,
        epsrel=settings.QUAD_EPSREL,
        limit=settings.QUAD_LIMIT,
        points=inner or None,
        full_output=1,
    )
    value, abserr = result[0], result[1]
    if not math.isfinite(value) or abserr > QUAD_TOLERANCE:
        message = result[3] if len(result) > 3 else "non-finite result"
        logger.error(f"Quadrature on [{lower}, {upper}] failed: {message} (abserr={abserr})")
        raise NumericFailureError(f"Quadrature did not converge: {message}", residual=abserr)
    return float(value)


def _secrecy_mass(pair: TransformedPair, lower: float, upper: float) -> float:
    """∫ f_Ỹ(ỹ) F_X̃(s - ỹ) dỹ over [lower, upper] with the mass below -Y_MAX added."""
    y_lo = _effective_minus_infinity(pair)
    start = max(lower, y_lo)
    tail = 0.0
    if lower < y_lo:
        edge = min(y_lo, upper)
        tail_mass = float(pair.yt.cdf(edge)) - float(pair.yt.cdf(lower))
        tail = tail_mass * float(pair.xt.cdf(pair.s - edge))
    if start >= upper:
        return tail
    breaks = [float(pair.yt.quantile(q)) for q in Y_BREAK_QUANTILES]
    # F_X̃(s - ỹ) falls on the scale of X̃, which can be far narrower than Ỹ.
    breaks += [pair.s - float(pair.xt.quantile(q)) for q in X_BREAK_QUANTILES]
    body = _integrate(
        lambda y: float(pair.yt.pdf(y) * pair.xt.cdf(pair.s - y)), start, upper, breaks
    )
    return body + tail


def independent_outage(scenario: ScenarioTag, pair: TransformedPair) -> float:
    """Outage probability when the two channels are independent.

    Args:
        scenario: Outage event definition.
        pair: Transformed marginals and thresholds.

    Returns:
        Outage probability in [0, 1].

    Raises:
        ConfigurationError: If the pair does not fit the scenario.
        NumericFailureError: If quadrature does not converge.
    """
    _check_pair(scenario, pair)
    gap = pair.gap
    f_x_t, f_y_gap = event_probabilities(pair)

    if scenario is ScenarioTag.ALT_NOCSIT:
        value = float(dual_value(CopulaKind.PRODUCT_PI, f_x_t, f_y_gap))
    elif scenario is ScenarioTag.CSIT:
        value = _secrecy_mass(pair, -math.inf, 0.0)
    elif scenario is ScenarioTag.NOCSIT:
        # Below s - t the secrecy event adds F_X̃(s - ỹ) - F_X̃(t) on top of E2.
        value = f_x_t + _secrecy_mass(pair, -math.inf, gap) - f_x_t * f_y_gap
    else:
        value = f_y_gap + _secrecy_mass(pair, gap, 0.0)

    return min(max(value, 0.0), 1.0)


def outage_curve(scenario: ScenarioTag, direction: Direction, pair: TransformedPair) -> float:
    """Value of the lower, upper or independent curve at one pair."""
    if direction is Direction.INDEPENDENT:
        return independent_outage(scenario, pair)
    return bound(scenario, direction, pair).value


def sufficient_condition_no_eavesdropper(
    scenario: ScenarioTag,
    pair: TransformedPair,
    probe_grid: Sequence[float] | np.ndarray | None = None,
) -> bool:
    """Check that the best case is decided by Bob's channel alone.

    CSIT: Pr(s < X̃ < s - ỹ) <= Pr(Ỹ >= ỹ) for every probe ỹ <= 0, which makes
    the lower bound F_X̃(s). NOCSIT: Pr(t < X̃ < s - ỹ) <= Pr(Ỹ >= ỹ) for every
    probe ỹ < s - t, which makes it F_X̃(t).

    Args:
        scenario: CSIT or NOCSIT.
        pair: Transformed marginals and thresholds.
        probe_grid: Probe points; a logarithmic grid over the admissible
            range is used when omitted.

    Returns:
        True iff the inequality holds at every probe point.

    Raises:
        ConfigurationError: On other scenarios, an empty grid or probes
            outside the admissible range.
    """
    _check_pair(scenario, pair)
    if scenario not in (ScenarioTag.CSIT, ScenarioTag.NOCSIT):
        raise ConfigurationError(f"No sufficient condition defined for {scenario.value}")

    edge = 0.0 if scenario is ScenarioTag.CSIT else pair.gap
    if probe_grid is None:
        depth = -_effective_minus_infinity(pair)
        probe_grid = edge - np.geomspace(depth, depth * 1e-9, 1000)
    grid = np.asarray(probe_grid, dtype=float)
    if grid.size == 0:
        raise ConfigurationError("probe_grid must not be empty")

    if scenario is ScenarioTag.CSIT:
        if np.any(grid > 0):
            raise ConfigurationError("CSIT probes must satisfy ỹ <= 0")
        floor = pair.xt.cdf(pair.s)
    else:
        if np.any(grid >= edge):
            raise ConfigurationError("NOCSIT probes must satisfy ỹ < s - t")
        floor = pair.xt.cdf(pair.t)

    gain = pair.xt.cdf(pair.s - grid) - floor
    escape = 1.0 - pair.yt.cdf(grid)
    return bool(np.all(gain <= escape + CONDITION_SLACK))
