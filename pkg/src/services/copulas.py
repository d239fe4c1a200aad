"""Extremal copulas, their duals, and couplings that attain the outage bounds.

The achieving couplings are discrete: both transformed marginals are
replaced by ``n`` quantile-midpoint atoms and paired by a permutation.
Every outage region here is a down-set in (x̃, ỹ): for fixed x̃ the outage
set in ỹ is an open half line (-inf, c(x̃)) with c non-increasing. That
staircase structure makes a greedy pairing optimal for both directions.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from src.models import ChannelParams, CopulaKind, Direction, ScenarioTag
from src.services.marginals import TransformedPair

logger = logging.getLogger(__name__)

MIN_ATOMS = 100


class CopulaDomainError(ValueError):
    """Exception raised for copula arguments outside [0, 1] or unsupported requests."""

    pass


class ResolutionError(ValueError):
    """Exception raised when a coupling plan is requested with too few atoms."""

    pass


class EmptyRequestError(ValueError):
    """Exception raised when zero samples are requested."""

    pass


@dataclass(frozen=True, eq=False)
class CouplingPlan:
    """Permutation coupling of quantile-midpoint atoms.

    Attributes:
        n_atoms: Number of atoms per axis.
        x_atoms: X̃ quantiles at (i + 0.5)/n, ascending.
        y_atoms: Ỹ quantiles at (j + 0.5)/n, ascending.
        assignment: Permutation; x-atom i is paired with y-atom assignment[i].
    """

    n_atoms: int
    x_atoms: np.ndarray
    y_atoms: np.ndarray
    assignment: np.ndarray

    @property
    def mass(self) -> float:
        """Probability carried by each atom pair."""
        return 1.0 / self.n_atoms

    def pairs(self) -> tuple[np.ndarray, np.ndarray]:
        """Paired (x̃, ỹ) atom coordinates in x-atom order."""
        return self.x_atoms, self.y_atoms[self.assignment]


def _check_unit(a: np.ndarray, b: np.ndarray) -> None:
    if np.any((a < 0) | (a > 1)) or np.any((b < 0) | (b > 1)):
        raise CopulaDomainError(f"Copula arguments must lie in [0, 1], got a={a}, b={b}")


def copula_value(kind: CopulaKind, a: float | np.ndarray, b: float | np.ndarray):
    """Evaluate W, M or Π at (a, b).

    Raises:
        CopulaDomainError: If an argument lies outside [0, 1].
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    _check_unit(a, b)
    if kind is CopulaKind.FRECHET_LOWER_W:
        value = np.maximum(a + b - 1.0, 0.0)
    elif kind is CopulaKind.FRECHET_UPPER_M:
        value = np.minimum(a, b)
    else:
        value = a * b
    return value[()] if value.ndim == 0 else value


def dual_value(kind: CopulaKind, a: float | np.ndarray, b: float | np.ndarray):
    """Evaluate the dual copula a + b - C(a, b), the probability of a union.

    Written out per kind so that W̄ saturates at exactly 1 and M̄ is exactly max(a, b).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    _check_unit(a, b)
    if kind is CopulaKind.FRECHET_LOWER_W:
        value = np.minimum(a + b, 1.0)
    elif kind is CopulaKind.FRECHET_UPPER_M:
        value = np.maximum(a, b)
    else:
        value = a + b - a * b
    return value[()] if value.ndim == 0 else value


def outage_ceiling(scenario: ScenarioTag, pair: TransformedPair, x: np.ndarray) -> np.ndarray:
    """Upper end c(x̃) of the outage half line {ỹ < c(x̃)}.

    ``inf`` means every ỹ is in outage at that x̃.
    """
    x = np.asarray(x, dtype=float)
    s, t = pair.s, pair.t
    if scenario is ScenarioTag.CSIT:
        return s - x
    if scenario is ScenarioTag.NOCSIT:
        return np.where(x < t, math.inf, s - x)
    if scenario is ScenarioTag.ALT_CSIT:
        return np.maximum(s - x, s - t)
    return np.where(x < t, math.inf, s - t)


def _pair_to_maximize_outage(x_ceiling: np.ndarray, y_atoms: np.ndarray) -> np.ndarray:
    # Serve the tightest ceilings (largest x̃) first with the smallest free ỹ.
    n = len(y_atoms)
    assignment = np.full(n, -1, dtype=np.int64)
    j = 0
    for i in range(n - 1, -1, -1):
        if j < n and y_atoms[j] < x_ceiling[i]:
            assignment[i] = j
            j += 1
    unmatched = np.flatnonzero(assignment < 0)
    assignment[unmatched] = np.arange(j, n)
    return assignment


def _pair_to_minimize_outage(x_ceiling: np.ndarray, y_atoms: np.ndarray) -> np.ndarray:
    # Serve the highest escape thresholds (smallest x̃) first with the largest free ỹ.
    n = len(y_atoms)
    assignment = np.full(n, -1, dtype=np.int64)
    k = n - 1
    for i in range(n):
        if k >= 0 and y_atoms[k] >= x_ceiling[i]:
            assignment[i] = k
            k -= 1
    unmatched = np.flatnonzero(assignment < 0)
    assignment[unmatched] = np.arange(0, k + 1)
    return assignment


def build_achieving_coupling(
    pair: TransformedPair,
    scenario: ScenarioTag,
    direction: Direction,
    n_atoms: int,
) -> CouplingPlan:
    """Construct a permutation coupling whose outage approaches the requested bound.

    Args:
        pair: Transformed marginals and thresholds.
        scenario: Outage event definition.
        direction: LOWER pairs atoms to minimize the count inside the outage
            region, UPPER to maximize it.
        n_atoms: Atoms per axis, at least 100.

    Returns:
        The coupling plan. Ties resolve to the lowest x-atom index.

    Raises:
        ResolutionError: If n_atoms is below 100.
        CopulaDomainError: If direction is INDEPENDENT.
    """
    if n_atoms < MIN_ATOMS:
        raise ResolutionError(f"n_atoms must be at least {MIN_ATOMS}, got {n_atoms}")
    if direction is Direction.INDEPENDENT:
        raise CopulaDomainError("The independent case has no extremal coupling plan")

    levels = (np.arange(n_atoms) + 0.5) / n_atoms
    x_atoms = np.asarray(pair.xt.quantile(levels), dtype=float)
    y_atoms = np.asarray(pair.yt.quantile(levels), dtype=float)
    ceiling = outage_ceiling(scenario, pair, x_atoms)

    if direction is Direction.UPPER:
        assignment = _pair_to_maximize_outage(ceiling, y_atoms)
    else:
        assignment = _pair_to_minimize_outage(ceiling, y_atoms)

    plan = CouplingPlan(
        n_atoms=n_atoms, x_atoms=x_atoms, y_atoms=y_atoms, assignment=assignment
    )
    logger.debug(
        f"Built {direction.value} plan for {scenario.value} with {n_atoms} atoms, "
        f"outage {plan_outage(plan, scenario, pair):.6f}"
    )
    return plan


def plan_outage(plan: CouplingPlan, scenario: ScenarioTag, pair: TransformedPair) -> float:
    """Exact outage probability of a coupling plan (fraction of pairs in the region)."""
    x, y = plan.pairs()
    inside = y < outage_ceiling(scenario, pair, x)
    return float(np.count_nonzero(inside)) * plan.mass


def stream_generator(seed: int, *stream: int) -> np.random.Generator:
    """Independent generator for the sub-stream ``stream`` of ``seed``.

    Streams with different keys are statistically independent and do not
    depend on the order in which they are created.
    """
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(stream)))


def sample_coupling(
    plan: CouplingPlan,
    count: int,
    seed: int,
    stream: tuple[int, ...] = (),
) -> tuple[np.ndarray, np.ndarray]:
    """Draw i.i.d. atom pairs uniformly from a plan.

    Args:
        plan: Coupling plan.
        count: Number of draws.
        seed: Root seed.
        stream: Sub-stream key, e.g. (point index, block index).

    Returns:
        Arrays (x̃, ỹ) of length ``count``.

    Raises:
        EmptyRequestError: If count is not positive.
    """
    if count <= 0:
        raise EmptyRequestError(f"count must be positive, got {count}")
    rng = stream_generator(seed, *stream)
    index = rng.integers(0, plan.n_atoms, size=count)
    return plan.x_atoms[index], plan.y_atoms[plan.assignment[index]]


def plan_histogram(
    plan: CouplingPlan,
    params: ChannelParams,
    bins: int = 100,
    gain_range: tuple[float, float] = (0.0, 5.0),
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Joint density of the plan mapped back to the fading gains X and Y.

    Args:
        plan: Coupling plan built for ``params``.
        params: Channel parameters used to undo the transform.
        bins: Bins per axis.
        gain_range: Common histogram range for both gains.

    Returns:
        Bin centers for X, bin centers for Y and a (bins, bins) density array
        indexed [x_bin, y_bin].
    """
    x_tilde, y_tilde = plan.pairs()
    x_gain = x_tilde / params.rho_x
    y_gain = -y_tilde / (2.0**params.rate_s * params.rho_y)
    density, x_edges, y_edges = np.histogram2d(
        x_gain, y_gain, bins=bins, range=[gain_range, gain_range]
    )
    area = (x_edges[1] - x_edges[0]) * (y_edges[1] - y_edges[0])
    density = density / (plan.n_atoms * area)
    return 0.5 * (x_edges[:-1] + x_edges[1:]), 0.5 * (y_edges[:-1] + y_edges[1:]), density
