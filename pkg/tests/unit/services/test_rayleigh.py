"""Unit tests for rayleigh service."""

import math

import numpy as np
import pytest

from src.models import BoundBranch, ChannelParams, Direction, ScenarioTag
from src.services.bounds_core import ConfigurationError, bound, outage_curve
from src.services.marginals import InvalidParameterError, transform
from src.services.rayleigh import (
    LimitVariant,
    NonIdentifiableError,
    RayleighRates,
    UnsupportedScenarioError,
    closed_bound,
    diversity_estimate,
    eve_snr_threshold,
    eve_snr_threshold_db,
    high_snr_threshold_db,
    limit_rs0,
    outage_probability,
    rs_sufficient_bound,
    ystar,
)

REFERENCE = RayleighRates(lt_x=1.0, lt_y=1.0 / 2**0.1, s=2**0.1 - 1, t=2**1.1 - 1)


class TestRayleighRates:
    """Tests for RayleighRates."""

    def test_from_params(self, nocsit_params):
        """Rates and thresholds follow the transform."""
        r = RayleighRates.from_params(nocsit_params)
        assert r.lt_x == pytest.approx(1.0)
        assert r.lt_y == pytest.approx(0.9330330, abs=1e-7)
        assert r.s == pytest.approx(0.0717735, abs=1e-7)
        assert r.t == pytest.approx(1.1435469, abs=1e-7)

    def test_non_positive_rate_raises(self):
        """Rates must be positive."""
        with pytest.raises(InvalidParameterError):
            RayleighRates(lt_x=0.0, lt_y=1.0, s=0.0, t=0.0)

    def test_t_below_s_raises(self):
        """t must not be below s."""
        with pytest.raises(InvalidParameterError):
            RayleighRates(lt_x=1.0, lt_y=1.0, s=1.0, t=0.5)


class TestYstar:
    """Tests for ystar."""

    @pytest.mark.parametrize("lt_y,expected", [(2.0, -1.6931472), (0.1, -1.4473168)])
    def test_closed_form(self, lt_y, expected):
        """Reference stationary points at λ̃x = 1, s = 1."""
        assert ystar(RayleighRates(1.0, lt_y, 1.0, 1.0)) == pytest.approx(expected, abs=1e-7)

    def test_equal_rates(self):
        """No stationary point when λ̃x = λ̃y."""
        assert ystar(RayleighRates(1.0, 1.0, 1.0, 1.0)) is None


class TestClosedBound:
    """Tests for closed_bound."""

    def test_csit_lower_trivial_case(self):
        """Middle case λ̃x e^{-λ̃x s} < λ̃y < λ̃x gives 1 - e^-1."""
        r = RayleighRates(1.0, 0.5, 1.0, 1.0)
        assert closed_bound(ScenarioTag.CSIT, Direction.LOWER, r) == pytest.approx(0.6321206, abs=1e-7)

    def test_csit_independent(self):
        """Independent CSIT outage at the reference setup."""
        value = closed_bound(ScenarioTag.CSIT, Direction.INDEPENDENT, REFERENCE)
        assert value == pytest.approx(0.5507512, abs=1e-7)

    def test_nocsit_lower(self):
        """NoCSIT lower bound is max[F_X̃(t), g₁(s - t)]."""
        value = closed_bound(ScenarioTag.NOCSIT, Direction.LOWER, REFERENCE)
        assert value == pytest.approx(0.6813133, abs=1e-7)

    @pytest.mark.parametrize("lt_x,lt_y,expected", [
        (1.0, 1.0, 1.0),
        (2.0, 1.0, 1.0),
        (1.0, 1.5, None),
    ])
    def test_csit_upper_one_iff_x_rate_not_smaller(self, lt_x, lt_y, expected):
        """CSIT upper bound is exactly one iff λ̃x >= λ̃y."""
        value = closed_bound(ScenarioTag.CSIT, Direction.UPPER, RayleighRates(lt_x, lt_y, 0.5, 0.5))
        if expected is None:
            assert value < 1.0
        else:
            assert value == expected

    def test_csit_lower_continuous_at_case_boundary(self):
        """Both cases agree where λ̃y = λ̃x e^{-λ̃x s}."""
        edge = math.exp(-1.0)
        below = closed_bound(ScenarioTag.CSIT, Direction.LOWER, RayleighRates(1.0, edge * (1 - 1e-12), 1.0, 1.0))
        above = closed_bound(ScenarioTag.CSIT, Direction.LOWER, RayleighRates(1.0, edge * (1 + 1e-12), 1.0, 1.0))
        assert abs(below - above) <= 1e-9

    def test_equal_rates_routed_to_generic_engine(self):
        """The λ̃x = λ̃y knife edge falls back to candidate enumeration."""
        r = RayleighRates(1.0, 1.0, 0.5, 1.5)
        for scenario in (ScenarioTag.CSIT, ScenarioTag.NOCSIT):
            for direction in (Direction.LOWER, Direction.UPPER):
                assert closed_bound(scenario, direction, r) == pytest.approx(
                    bound(scenario, direction, r.to_pair()).value, abs=1e-12
                )

    @pytest.mark.parametrize("scenario", [ScenarioTag.ALT_CSIT, ScenarioTag.ALT_NOCSIT])
    def test_alt_scenarios_unsupported(self, scenario):
        """Alt scenarios have no closed form."""
        with pytest.raises(UnsupportedScenarioError) as exc_info:
            closed_bound(scenario, Direction.LOWER, REFERENCE)
        assert scenario.value in str(exc_info.value)

    @pytest.mark.parametrize("scenario", [ScenarioTag.CSIT, ScenarioTag.NOCSIT])
    @pytest.mark.parametrize("direction", list(Direction))
    @pytest.mark.parametrize("snr_bob", [-5.0, 5.0, 15.0])
    @pytest.mark.parametrize("snr_eve", [-5.0, 5.0, 15.0])
    def test_matches_generic_engine(self, scenario, direction, snr_bob, snr_eve):
        """Closed forms agree with the generic engine to 1e-9."""
        params = ChannelParams.from_db(snr_bob, snr_eve, rate_s=0.7, rate_d=0.4)
        closed = closed_bound(scenario, direction, RayleighRates.from_params(params))
        generic = outage_curve(scenario, direction, transform(params))
        assert closed == pytest.approx(generic, abs=1e-9)


class TestOutageProbability:
    """Tests for outage_probability."""

    def test_alt_uses_generic_engine(self, nocsit_params):
        """Alt scenarios are evaluated by the generic engine."""
        value = outage_probability(ScenarioTag.ALT_NOCSIT, Direction.LOWER, nocsit_params)
        assert value == pytest.approx(0.6813133, abs=1e-7)

    def test_csit_uses_closed_form(self, csit_params):
        """CSIT independent outage at the reference setup."""
        value = outage_probability(ScenarioTag.CSIT, Direction.INDEPENDENT, csit_params)
        assert value == pytest.approx(0.5507512, abs=1e-7)


class TestEveSnrThreshold:
    """Tests for eve_snr_threshold and its dB variants."""

    def test_reference_threshold(self):
        """Threshold at ρx = 15 dB, R_S = 0.1 is 29.5721 (14.7088 dB)."""
        assert eve_snr_threshold(1.0, 1.0, 10**1.5, 0.1) == pytest.approx(29.5721, abs=1e-4)
        assert eve_snr_threshold_db(1.0, 1.0, 15.0, 0.1) == pytest.approx(14.7088, abs=1e-3)

    def test_zero_rate_limit(self):
        """With R_S = 0 the threshold is ρx λy/λx."""
        assert eve_snr_threshold(1.0, 2.0, 5.0, 0.0) == pytest.approx(10.0)

    def test_high_snr_approximation(self):
        """At 40 dB and R_S = 2 the exact threshold is within 0.2 dB of 40 - 3·2."""
        exact = eve_snr_threshold_db(1.0, 1.0, 40.0, 2.0)
        assert exact == pytest.approx(34.0, abs=0.2)
        assert high_snr_threshold_db(1.0, 1.0, 40.0, 2.0) == pytest.approx(exact, abs=0.05)

    @pytest.mark.parametrize("factor,branch", [
        (0.99, BoundBranch.TRIVIAL_BOUNDARY),
        (1.01, BoundBranch.STATIONARY_INTERIOR),
    ])
    def test_branch_flips_across_threshold(self, factor, branch):
        """The lower bound switches branch when ρy crosses the threshold."""
        threshold = eve_snr_threshold(1.0, 1.0, 10**1.5, 0.1)
        params = ChannelParams(
            lambda_x=1.0, lambda_y=1.0, rho_x=10**1.5, rho_y=factor * threshold, rate_s=0.1
        )
        assert bound(ScenarioTag.CSIT, Direction.LOWER, transform(params)).branch is branch

    def test_invalid_input_raises(self):
        """Non-positive inputs are rejected."""
        with pytest.raises(InvalidParameterError):
            eve_snr_threshold(1.0, 1.0, 0.0, 0.1)


class TestRsSufficientBound:
    """Tests for rs_sufficient_bound."""

    @pytest.mark.parametrize("rho_x,expected", [(2.0, 1.0), (1.0, 0.0)])
    def test_values(self, rho_x, expected):
        """log₂ of the SNR ratio."""
        assert rs_sufficient_bound(1.0, 1.0, rho_x, 1.0) == pytest.approx(expected)

    def test_rates_below_bound_give_trivial_lower_bound(self):
        """Below the sufficient rate the CSIT lower bound equals F_X̃(s)."""
        rate = 0.9 * rs_sufficient_bound(1.0, 1.0, 2.0, 1.0)
        r = RayleighRates.from_params(ChannelParams(lambda_x=1.0, lambda_y=1.0, rho_x=2.0, rho_y=1.0, rate_s=rate))
        expected = -math.expm1(-r.lt_x * r.s)
        assert closed_bound(ScenarioTag.CSIT, Direction.LOWER, r) == pytest.approx(expected, abs=1e-12)


class TestLimitRs0:
    """Tests for limit_rs0."""

    def test_csit_upper(self, rate_params):
        """Worst-case limit at ρx = 5 dB, ρy = 0 dB."""
        assert limit_rs0(LimitVariant.CSIT_UPPER, rate_params) == pytest.approx(0.5985108, abs=1e-6)

    def test_csit_independent(self, rate_params):
        """Independent limit λ̃x / (λ̃x + λy/ρy)."""
        assert limit_rs0(LimitVariant.CSIT_INDEPENDENT, rate_params) == pytest.approx(0.2402531, abs=1e-6)

    def test_csit_lower_positive_limit(self):
        """Best-case limit at ρy = 5.1 dB is positive."""
        params = ChannelParams.from_db(5.0, 5.1)
        assert limit_rs0(LimitVariant.CSIT_LOWER, params) == pytest.approx(0.0084706, abs=1e-6)
        assert limit_rs0(LimitVariant.CSIT_INDEPENDENT, params) == pytest.approx(0.5057562, abs=1e-6)

    def test_csit_lower_zero_limit(self):
        """λy/ρy >= λx/ρx gives a zero limit."""
        assert limit_rs0(LimitVariant.CSIT_LOWER, ChannelParams.from_db(0.0, 0.0)) == 0.0

    @pytest.mark.parametrize("variant", list(LimitVariant))
    @pytest.mark.parametrize("snr_eve", [0.0, 5.1, 8.0])
    def test_matches_closed_bound_at_tiny_rate(self, variant, snr_eve):
        """Analytic limits agree with the closed forms at R_S = 1e-6."""
        scenario, direction = {
            LimitVariant.CSIT_LOWER: (ScenarioTag.CSIT, Direction.LOWER),
            LimitVariant.CSIT_UPPER: (ScenarioTag.CSIT, Direction.UPPER),
            LimitVariant.CSIT_INDEPENDENT: (ScenarioTag.CSIT, Direction.INDEPENDENT),
            LimitVariant.NOCSIT_LOWER: (ScenarioTag.NOCSIT, Direction.LOWER),
            LimitVariant.NOCSIT_UPPER: (ScenarioTag.NOCSIT, Direction.UPPER),
            LimitVariant.NOCSIT_INDEPENDENT: (ScenarioTag.NOCSIT, Direction.INDEPENDENT),
        }[variant]
        params = ChannelParams.from_db(5.0, snr_eve, rate_s=1e-6, rate_d=0.5)
        closed = closed_bound(scenario, direction, RayleighRates.from_params(params))
        assert limit_rs0(variant, params) == pytest.approx(closed, abs=1e-4)

    def test_variant_lookup(self):
        """LimitVariant.of maps (scenario, direction) pairs."""
        assert LimitVariant.of(ScenarioTag.NOCSIT, Direction.UPPER) is LimitVariant.NOCSIT_UPPER
        with pytest.raises(UnsupportedScenarioError):
            LimitVariant.of(ScenarioTag.ALT_CSIT, Direction.LOWER)


class TestDiversityEstimate:
    """Tests for diversity_estimate."""

    GRID = np.linspace(20.0, 60.0, 21)
    HIGH_GRID = np.linspace(100.0, 300.0, 21)

    @pytest.mark.parametrize("scenario,direction,rate_d,grid", [
        (ScenarioTag.CSIT, Direction.LOWER, 0.0, "low"),
        (ScenarioTag.CSIT, Direction.INDEPENDENT, 0.0, "low"),
        (ScenarioTag.NOCSIT, Direction.LOWER, 1.0, "low"),
        (ScenarioTag.NOCSIT, Direction.INDEPENDENT, 1.0, "low"),
        (ScenarioTag.CSIT, Direction.UPPER, 0.0, "high"),
        (ScenarioTag.NOCSIT, Direction.UPPER, 1.0, "high"),
    ])
    def test_unit_diversity(self, scenario, direction, rate_d, grid):
        """All curves decay with diversity one."""
        params = ChannelParams.from_db(0.0, 0.0, rate_s=0.1, rate_d=rate_d)
        snr_grid = self.GRID if grid == "low" else self.HIGH_GRID
        slope = diversity_estimate(scenario, direction, params, snr_grid)
        assert slope == pytest.approx(1.0, abs=0.05)

    def test_upper_converges_slowly(self):
        """The worst case carries a log factor, so its mid-SNR slope is below one."""
        params = ChannelParams.from_db(0.0, 0.0, rate_s=0.1)
        slope = diversity_estimate(ScenarioTag.CSIT, Direction.UPPER, params, self.GRID)
        assert 0.85 < slope < 1.0

    def test_saturated_curve_raises(self):
        """A worst case stuck at one has no slope."""
        # Eve at 80 dB keeps λ̃x >= λ̃y across the whole grid.
        params = ChannelParams.from_db(0.0, 80.0, rate_s=0.1)
        with pytest.raises(NonIdentifiableError):
            diversity_estimate(ScenarioTag.CSIT, Direction.UPPER, params, self.GRID)

    @pytest.mark.parametrize("grid", [
        [20.0, 25.0, 30.0, 35.0],
        [20.0, 25.0, 30.0, 35.0, 39.0],
        [20.0, 30.0, 25.0, 40.0, 50.0],
    ])
    def test_invalid_grid_raises(self, grid):
        """Short, narrow or unsorted grids are rejected."""
        with pytest.raises(ConfigurationError):
            diversity_estimate(ScenarioTag.CSIT, Direction.LOWER, ChannelParams.from_db(0.0, 0.0), grid)
