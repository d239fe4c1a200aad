"""Result containers returned by the bound, Monte Carlo and rate services."""

import math
from dataclasses import dataclass, field

from src.models.channel import BoundBranch


@dataclass(frozen=True)
class BoundResult:
    """Outcome of a candidate-enumeration bound.

    Attributes:
        value: Outage probability in [0, 1].
        branch: Candidate class that produced ``value``.
        stationary_points: Feasible stationary points that entered the candidate set.
        candidates: (location, objective value) pairs that were compared. Analytic
            limits at minus infinity use ``-math.inf`` as location; the constant 1
            cap uses ``math.nan``.
    """

    value: float
    branch: BoundBranch
    stationary_points: tuple[float, ...] = ()
    candidates: tuple[tuple[float, float], ...] = field(default=())


@dataclass(frozen=True)
class MCEstimate:
    """Bernoulli estimate of an outage probability.

    Attributes:
        mean: Fraction of draws inside the outage region.
        std_error: sqrt(mean * (1 - mean) / n_samples).
        n_samples: Number of draws.
        seed: Seed the draws were derived from.
    """

    mean: float
    std_error: float
    n_samples: int
    seed: int

    def contains(self, value: float, sigmas: float = 3.0, floor: float = 0.0) -> bool:
        """Check whether ``value`` lies inside the acceptance band of this estimate."""
        return abs(self.mean - value) <= max(sigmas * self.std_error, floor)


@dataclass(frozen=True)
class RateSolution:
    """Epsilon-outage secrecy rate.

    Attributes:
        rate_s: Largest secrecy rate meeting the target, ``math.inf`` when
            the target is met at every rate that was probed.
        achieved_eps: Outage probability at ``rate_s``.
        iterations: Bisection iterations spent (0 for the zero and infinity markers).
    """

    rate_s: float
    achieved_eps: float
    iterations: int

    @property
    def is_unbounded(self) -> bool:
        """True when the rate is the infinity marker."""
        return math.isinf(self.rate_s)
