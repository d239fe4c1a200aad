"""Unit tests for marginals service."""

import math

import numpy as np
import pytest
from scipy import stats
from scipy.integrate import quad

from src.models import ChannelParams
from src.services.marginals import (
    AffineMarginal,
    Axis,
    DistributionMarginal,
    InvalidParameterError,
    Marginal,
    TransformedPair,
    exponential_marginal,
    transform,
    transform_marginals,
)


class TestExponentialMarginal:
    """Tests for exponential_marginal and ExponentialMarginal."""

    def test_cdf_at_support_left_end(self):
        """Positive-axis cdf is zero at the origin."""
        assert exponential_marginal(1.0, Axis.POSITIVE).cdf(0.0) == 0.0

    def test_cdf_at_one(self):
        """Positive-axis cdf matches 1 - e^-1."""
        marginal = exponential_marginal(1.0, Axis.POSITIVE)
        assert marginal.cdf(1.0) == pytest.approx(0.6321206, abs=1e-7)

    def test_negative_axis_cdf(self):
        """Negative-axis cdf is exp(rate * y)."""
        marginal = exponential_marginal(0.933033, Axis.NEGATIVE)
        assert marginal.cdf(-1.0717735) == pytest.approx(math.exp(-1.0), abs=1e-6)

    def test_negative_axis_cdf_is_one_above_zero(self):
        """Negative-axis cdf saturates at one for positive arguments."""
        marginal = exponential_marginal(2.0, Axis.NEGATIVE)
        assert marginal.cdf(0.5) == 1.0
        assert marginal.pdf(0.5) == 0.0

    @pytest.mark.parametrize("axis,lower,upper", [
        (Axis.POSITIVE, 0.0, 1.3),
        (Axis.NEGATIVE, -1.3, 0.0),
    ])
    def test_pdf_integrates_to_cdf(self, axis, lower, upper):
        """Integrating the pdf reproduces the cdf increment."""
        marginal = exponential_marginal(0.7, axis)
        mass, _ = quad(lambda x: float(marginal.pdf(x)), lower, upper)
        assert mass == pytest.approx(float(marginal.cdf(upper) - marginal.cdf(lower)), abs=1e-10)

    @pytest.mark.parametrize("axis", [Axis.POSITIVE, Axis.NEGATIVE])
    def test_quantile_inverts_cdf(self, axis):
        """cdf(quantile(u)) returns u."""
        marginal = exponential_marginal(1.7, axis)
        u = np.array([1e-9, 0.01, 0.3, 0.5, 0.9, 1 - 1e-9])
        np.testing.assert_allclose(marginal.cdf(marginal.quantile(u)), u, rtol=1e-9)

    def test_analytic_pdf_derivative(self):
        """Analytic derivative agrees with central differences of scipy's density."""
        analytic = exponential_marginal(1.0, Axis.POSITIVE).pdf_derivative(0.7)
        numeric = DistributionMarginal(stats.expon()).pdf_derivative(0.7)
        assert analytic == pytest.approx(-math.exp(-0.7), rel=1e-12)
        assert numeric == pytest.approx(analytic, rel=1e-6)

    @pytest.mark.parametrize("rate", [0.0, -1.0, math.inf, math.nan])
    def test_invalid_rate_raises(self, rate):
        """Non-positive or non-finite rates are rejected."""
        with pytest.raises(InvalidParameterError) as exc_info:
            exponential_marginal(rate)
        assert "rate" in str(exc_info.value)


class TestTransform:
    """Tests for transform."""

    def test_rates_and_thresholds(self, nocsit_params):
        """Reference NoCSIT setup gives λ̃y = 0.9330330, s = 0.0717735, t = 1.1435469."""
        pair = transform(nocsit_params)
        assert pair.xt.rate == pytest.approx(1.0)
        assert pair.yt.rate == pytest.approx(0.9330330, abs=1e-7)
        assert pair.s == pytest.approx(0.0717735, abs=1e-7)
        assert pair.t == pytest.approx(1.1435469, abs=1e-7)

    def test_zero_dummy_rate_gives_equal_thresholds(self, csit_params):
        """With R_d = 0 the thresholds coincide."""
        pair = transform(csit_params)
        assert pair.t == pair.s
        assert pair.gap == 0.0

    def test_supports(self, csit_params):
        """X̃ lives on the positive and Ỹ on the negative half axis."""
        pair = transform(csit_params)
        assert pair.xt.support == (0.0, math.inf)
        assert pair.yt.support == (-math.inf, 0.0)

    def test_snr_scales_rates(self):
        """Doubling ρx halves λ̃x."""
        base = ChannelParams(lambda_x=1.0, lambda_y=1.0, rho_x=2.0, rho_y=1.0)
        doubled = base.replace(rho_x=4.0)
        assert transform(doubled).xt.rate == pytest.approx(transform(base).xt.rate / 2)


    @pytest.mark.parametrize("field,values", [
        ("rate_s", [0.0, 0.1, 0.5, 1.0, 3.0]),
        ("rho_y", [0.1, 1.0, 10.0, 100.0]),
    ])
    def test_eve_rate_decreasing(self, nocsit_params, field, values):
        """λ̃y strictly decreases in R_S and in ρy."""
        rates = [transform(nocsit_params.replace(**{field: v})).yt.rate for v in values]
        assert all(a > b for a, b in zip(rates, rates[1:]))

    def test_thresholds_increasing_in_rate(self, nocsit_params):
        """s and t strictly increase in R_S."""
        pairs = [transform(nocsit_params.replace(rate_s=v)) for v in (0.0, 0.1, 0.5, 1.0, 3.0)]
        assert all(a.s < b.s for a, b in zip(pairs, pairs[1:]))
        assert all(a.t < b.t for a, b in zip(pairs, pairs[1:]))


class TestTransformedPair:
    """Tests for TransformedPair validation."""

    def test_s_above_t_raises(self):
        """Thresholds must satisfy s <= t."""
        with pytest.raises(InvalidParameterError) as exc_info:
            TransformedPair(
                xt=exponential_marginal(1.0),
                yt=exponential_marginal(1.0, Axis.NEGATIVE),
                s=1.0,
                t=0.5,
            )
        assert "0 <= s <= t" in str(exc_info.value)

    def test_non_finite_threshold_raises(self):
        """Infinite thresholds are rejected."""
        with pytest.raises(InvalidParameterError):
            TransformedPair(
                xt=exponential_marginal(1.0),
                yt=exponential_marginal(1.0, Axis.NEGATIVE),
                s=0.0,
                t=math.inf,
            )


class TestTransformMarginals:
    """Tests for transform_marginals with scipy distributions."""

    def test_matches_exponential_transform(self, nocsit_params):
        """Exponential gains through the generic path reproduce transform()."""
        generic = transform_marginals(
            DistributionMarginal(stats.expon()),
            DistributionMarginal(stats.expon()),
            nocsit_params.rho_x,
            nocsit_params.rho_y,
            rate_s=nocsit_params.rate_s,
            rate_d=nocsit_params.rate_d,
        )
        closed = transform(nocsit_params)
        y = np.array([-3.0, -1.0, -0.2])
        x = np.array([0.1, 1.0, 4.0])
        np.testing.assert_allclose(generic.yt.cdf(y), closed.yt.cdf(y), rtol=1e-12)
        np.testing.assert_allclose(generic.xt.cdf(x), closed.xt.cdf(x), rtol=1e-12)
        np.testing.assert_allclose(generic.yt.pdf(y), closed.yt.pdf(y), rtol=1e-12)
        assert generic.t == pytest.approx(closed.t)

    def test_mirrored_quantile(self):
        """Negative scaling maps quantile u to -c times the base (1 - u) quantile."""
        marginal = AffineMarginal(DistributionMarginal(stats.expon()), -2.0)
        assert marginal.support == (-math.inf, 0.0)
        assert marginal.quantile(0.25) == pytest.approx(-2.0 * stats.expon.ppf(0.75))

    def test_gain_with_negative_support_raises(self):
        """Gains must be supported on [0, inf)."""
        with pytest.raises(InvalidParameterError) as exc_info:
            transform_marginals(
                DistributionMarginal(stats.norm()),
                DistributionMarginal(stats.expon()),
                1.0,
                1.0,
            )
        assert "x_gain" in str(exc_info.value)

    def test_negative_rate_raises(self):
        """Negative rates are rejected."""
        with pytest.raises(InvalidParameterError):
            transform_marginals(
                DistributionMarginal(stats.expon()),
                DistributionMarginal(stats.expon()),
                1.0,
                1.0,
                rate_s=-0.1,
            )


class _UniformGain(Marginal):
    support = (0.0, 2.0)

    def cdf(self, x):
        return np.clip(np.asarray(x, dtype=float) / 2.0, 0.0, 1.0)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where((x >= 0.0) & (x <= 2.0), 0.5, 0.0)


class _Logistic(Marginal):
    support = (-math.inf, math.inf)

    def cdf(self, x):
        return 1.0 / (1.0 + np.exp(-np.asarray(x, dtype=float)))

    def pdf(self, x):
        p = self.cdf(x)
        return p * (1.0 - p)


class _MirroredExponential(Marginal):
    support = (-math.inf, 0.0)

    def cdf(self, x):
        return np.exp(np.minimum(np.asarray(x, dtype=float), 0.0))

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x <= 0.0, np.exp(np.minimum(x, 0.0)), 0.0)


class TestQuantileFallback:
    """Tests for the bisection quantile of marginals without a closed-form inverse."""

    @pytest.mark.parametrize("marginal,inverse", [
        (_UniformGain(), lambda u: 2.0 * u),
        (_Logistic(), lambda u: math.log(u / (1.0 - u))),
        (_MirroredExponential(), math.log),
    ])
    @pytest.mark.parametrize("u", [1e-6, 0.1, 0.5, 0.9, 1.0 - 1e-6])
    def test_inverts_cdf(self, marginal, inverse, u):
        """Bisection on the cdf lands within 1e-8 of the exact quantile."""
        assert marginal.quantile(u) == pytest.approx(inverse(u), abs=1e-8)

    def test_array_input_keeps_shape(self):
        """Arrays are inverted elementwise."""
        values = _Logistic().quantile(np.array([[0.25, 0.5], [0.75, 0.5]]))
        assert values.shape == (2, 2)
        assert values[0, 1] == pytest.approx(0.0, abs=1e-10)

    def test_endpoints_map_to_support(self):
        """Levels 0 and 1 give the ends of the support."""
        marginal = _MirroredExponential()
        assert marginal.quantile(0.0) == -math.inf
        assert marginal.quantile(1.0) == 0.0

    def test_usable_in_transform_marginals(self):
        """A marginal with only cdf and pdf works as a fading law."""
        pair = transform_marginals(_UniformGain(), _UniformGain(), 1.0, 1.0, rate_s=0.5)
        assert pair.yt.quantile(0.5) == pytest.approx(-math.sqrt(2.0), abs=1e-10)
