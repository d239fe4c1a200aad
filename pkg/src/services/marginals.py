"""Marginal fading distributions and the transformed pair (X̃, Ỹ).

This module provides:
- A ``Marginal`` interface (cdf, pdf, pdf derivative, quantile, support)
- Closed-form exponential marginals on either half axis
- Wrappers for continuous scipy.stats distributions and affine rescalings
- The transform that reduces every outage event to statements about
  X̃ = ρx·X and Ỹ = -2^R_S·ρy·Y
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Any

import numpy as np
from scipy.optimize import bisect

from src.models import ChannelParams

logger = logging.getLogger(__name__)

ArrayLike = float | np.ndarray

# Relative and absolute floor of the central difference step for pdf derivatives
DERIVATIVE_STEP = 1e-6

# Absolute tolerance of the bisection quantile fallback
QUANTILE_XTOL = 1e-12


class InvalidParameterError(ValueError):
    """Exception raised for invalid distribution or channel parameters.

    Raised when a scale, rate or SNR is not strictly positive and finite,
    or when transformed thresholds violate 0 <= s <= t.
    """

    pass


class Axis(str, Enum):
    """Half axis an exponential marginal lives on."""

    POSITIVE = "positive_axis"
    NEGATIVE = "negative_axis"


class Marginal(ABC):
    """One-dimensional continuous distribution.

    All methods accept scalars or numpy arrays and evaluate elementwise.
    Subclasses must provide support, cdf and pdf; quantile falls back to
    bisection on the cdf.
    """

    @property
    @abstractmethod
    def support(self) -> tuple[float, float]:
        """Closed hull of the support as (left, right)."""

    @abstractmethod
    def cdf(self, x: ArrayLike) -> ArrayLike: ...

    @abstractmethod
    def pdf(self, x: ArrayLike) -> ArrayLike: ...

    def quantile(self, u: ArrayLike) -> ArrayLike:
        """Inverse cdf by bisection to QUANTILE_XTOL; closed forms override this."""
        levels = np.asarray(u, dtype=float)
        values = np.array([self._bisect_quantile(float(q)) for q in levels.ravel()])
        if levels.ndim == 0:
            return float(values[0])
        return values.reshape(levels.shape)

    def _bisect_quantile(self, q: float) -> float:
        left, right = self.support
        if q <= 0.0:
            return left
        if q >= 1.0:
            return right
        lo = left if math.isfinite(left) else min(right, 0.0) - 1.0
        hi = right if math.isfinite(right) else max(left, 0.0) + 1.0
        width = 1.0
        while float(self.cdf(lo)) > q:
            lo -= width
            width *= 2.0
        width = 1.0
        while float(self.cdf(hi)) < q:
            hi += width
            width *= 2.0
        return float(bisect(lambda x: float(self.cdf(x)) - q, lo, hi, xtol=QUANTILE_XTOL))

    def pdf_derivative(self, x: ArrayLike) -> ArrayLike:
        """Central difference of the density, step max(1e-6, 1e-6*|x|)."""
        x = np.asarray(x, dtype=float)
        h = np.maximum(DERIVATIVE_STEP, DERIVATIVE_STEP * np.abs(x))
        return (self.pdf(x + h) - self.pdf(x - h)) / (2.0 * h)


@dataclass(frozen=True)
class ExponentialMarginal(Marginal):
    """Exponential law with the given rate, mirrored onto the negative axis if requested.

    Attributes:
        rate: Inverse scale, strictly positive.
        axis: POSITIVE gives cdf 1 - exp(-rate*x) on [0, inf); NEGATIVE gives
            cdf exp(rate*y) on (-inf, 0].
    """

    rate: float
    axis: Axis = Axis.POSITIVE

    @property
    def support(self) -> tuple[float, float]:
        if self.axis is Axis.POSITIVE:
            return (0.0, math.inf)
        return (-math.inf, 0.0)

    def cdf(self, x: ArrayLike) -> ArrayLike:
        if self.axis is Axis.POSITIVE:
            return -np.expm1(-self.rate * np.maximum(x, 0.0))
        return np.exp(self.rate * np.minimum(x, 0.0))

    def pdf(self, x: ArrayLike) -> ArrayLike:
        if self.axis is Axis.POSITIVE:
            inside = np.asarray(x) >= 0
            return np.where(inside, self.rate * np.exp(-self.rate * np.maximum(x, 0.0)), 0.0)
        inside = np.asarray(x) <= 0
        return np.where(inside, self.rate * np.exp(self.rate * np.minimum(x, 0.0)), 0.0)

    def pdf_derivative(self, x: ArrayLike) -> ArrayLike:
        sign = -1.0 if self.axis is Axis.POSITIVE else 1.0
        return sign * self.rate * self.pdf(x)

    def quantile(self, u: ArrayLike) -> ArrayLike:
        if self.axis is Axis.POSITIVE:
            return -np.log1p(-np.asarray(u, dtype=float)) / self.rate
        return np.log(u) / self.rate


@dataclass(frozen=True)
class DistributionMarginal(Marginal):
    """Any continuous scipy.stats frozen distribution as a Marginal.

    The density derivative falls back to central differences.
    """

    dist: Any

    @property
    def support(self) -> tuple[float, float]:
        left, right = self.dist.support()
        return (float(left), float(right))

    def cdf(self, x: ArrayLike) -> ArrayLike:
        return self.dist.cdf(x)

    def pdf(self, x: ArrayLike) -> ArrayLike:
        return self.dist.pdf(x)

    def quantile(self, u: ArrayLike) -> ArrayLike:
        return self.dist.ppf(u)


@dataclass(frozen=True)
class AffineMarginal(Marginal):
    """Law of ``scale * Z`` for a base marginal Z and a non-zero scale.

    A negative scale mirrors the distribution, turning a gain on [0, inf)
    into one on (-inf, 0].
    """

    base: Marginal
    scale: float

    @property
    def support(self) -> tuple[float, float]:
        left, right = self.base.support
        ends = sorted((self.scale * left, self.scale * right))
        return (ends[0], ends[1])

    def cdf(self, x: ArrayLike) -> ArrayLike:
        z = np.asarray(x, dtype=float) / self.scale
        if self.scale > 0:
            return self.base.cdf(z)
        return 1.0 - self.base.cdf(z)

    def pdf(self, x: ArrayLike) -> ArrayLike:
        return self.base.pdf(np.asarray(x, dtype=float) / self.scale) / abs(self.scale)

    def pdf_derivative(self, x: ArrayLike) -> ArrayLike:
        z = np.asarray(x, dtype=float) / self.scale
        return self.base.pdf_derivative(z) / (self.scale * abs(self.scale))

    def quantile(self, u: ArrayLike) -> ArrayLike:
        u = np.asarray(u, dtype=float)
        if self.scale > 0:
            return self.scale * self.base.quantile(u)
        return self.scale * self.base.quantile(1.0 - u)


@dataclass(frozen=True)
class TransformedPair:
    """Marginals of X̃ and Ỹ together with the thresholds s and t.

    Attributes:
        xt: Marginal of X̃ = ρx·X, supported on [0, inf).
        yt: Marginal of Ỹ = -2^R_S·ρy·Y, supported on (-inf, 0].
        s: Secrecy threshold 2^R_S - 1.
        t: Decoding threshold 2^(R_d + R_S) - 1, never below s.
    """

    xt: Marginal
    yt: Marginal
    s: float
    t: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.s) and math.isfinite(self.t)):
            raise InvalidParameterError(f"Thresholds must be finite, got s={self.s}, t={self.t}")
        if self.s < 0 or self.t < self.s:
            raise InvalidParameterError(
                f"Thresholds must satisfy 0 <= s <= t, got s={self.s}, t={self.t}"
            )

    @property
    def gap(self) -> float:
        """s - t, the Eve threshold of the dummy-decoding event."""
        return self.s - self.t


def _check_rate(rate: float, name: str = "rate") -> None:
    if not (math.isfinite(rate) and rate > 0):
        raise InvalidParameterError(f"{name} must be a positive finite number, got {rate}")


def exponential_marginal(rate: float, sign: Axis = Axis.POSITIVE) -> ExponentialMarginal:
    """Create an exponential marginal on the requested half axis.

    Args:
        rate: Inverse scale, strictly positive.
        sign: Half axis of the support.

    Returns:
        The exponential Marginal.

    Raises:
        InvalidParameterError: If rate is not strictly positive and finite.
    """
    _check_rate(rate)
    return ExponentialMarginal(rate=float(rate), axis=Axis(sign))


def transform(params: ChannelParams) -> TransformedPair:
    """Transformed pair of a Rayleigh (exponential gain) wiretap link.

    Args:
        params: Channel parameters with linear SNRs.

    Returns:
        TransformedPair with λ̃x = λx/ρx and λ̃y = λy/(2^R_S·ρy).
    """
    rate_x = params.lambda_x / params.rho_x
    rate_y = params.lambda_y / (2.0**params.rate_s * params.rho_y)
    _check_rate(rate_x, "lambda_x / rho_x")
    _check_rate(rate_y, "lambda_y / (2^R_S rho_y)")
    logger.debug(f"Transformed pair: lt_x={rate_x:.6g}, lt_y={rate_y:.6g}, s={params.s:.6g}")
    return TransformedPair(
        xt=ExponentialMarginal(rate_x, Axis.POSITIVE),
        yt=ExponentialMarginal(rate_y, Axis.NEGATIVE),
        s=params.s,
        t=params.t,
    )


def transform_marginals(
    x_gain: Marginal,
    y_gain: Marginal,
    rho_x: float,
    rho_y: float,
    rate_s: float = 0.0,
    rate_d: float = 0.0,
) -> TransformedPair:
    """Transformed pair for arbitrary non-negative gain marginals.

    Args:
        x_gain: Distribution of Bob's channel gain X on [0, inf).
        y_gain: Distribution of Eve's channel gain Y on [0, inf).
        rho_x: Bob's linear receiver SNR.
        rho_y: Eve's linear receiver SNR.
        rate_s: Secrecy rate in bits per channel use.
        rate_d: Dummy rate in bits per channel use.

    Returns:
        TransformedPair of X̃ = ρx·X and Ỹ = -2^R_S·ρy·Y.

    Raises:
        InvalidParameterError: On non-positive SNRs, negative rates or gain
            marginals that put mass on the negative axis.
    """
    _check_rate(rho_x, "rho_x")
    _check_rate(rho_y, "rho_y")
    if rate_s < 0 or rate_d < 0:
        raise InvalidParameterError(f"Rates must be non-negative, got R_S={rate_s}, R_d={rate_d}")
    for name, gain in (("x_gain", x_gain), ("y_gain", y_gain)):
        if gain.support[0] < 0:
            raise InvalidParameterError(f"{name} must be supported on [0, inf)")

    return TransformedPair(
        xt=AffineMarginal(x_gain, rho_x),
        yt=AffineMarginal(y_gain, -(2.0**rate_s) * rho_y),
        s=2.0**rate_s - 1.0,
        t=2.0 ** (rate_s + rate_d) - 1.0,
    )
