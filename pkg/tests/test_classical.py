import math

import numpy as np
import pytest
from scipy.special import gammaln

from weibull_estlab import (
    DegenerateSampleError,
    PercentileConfig,
    SortedSample,
    WeibullParams,
    fit_lm,
    fit_mlm,
    fit_mm,
    fit_pm,
    quantile,
    sample,
    sample_lmoments,
)
from weibull_estlab.classical import log_moments

from conftest import random_positive_sample


def cv_ratio(a):
    return math.exp(float(gammaln(1 + 2 / a) - 2 * gammaln(1 + 1 / a))) - 1.0


class TestSampleLMoments:
    def test_two_points(self):
        lm = sample_lmoments(SortedSample.from_data([1.0, 2.0]))
        assert lm.m1 == pytest.approx(1.5, rel=1e-15)
        assert lm.m2 == pytest.approx(0.5, rel=1e-15)

    def test_degenerate(self):
        lm = sample_lmoments(SortedSample.from_data([4.0] * 6))
        assert lm.m1 == pytest.approx(4.0, rel=1e-15)
        assert lm.m2 == pytest.approx(0.0, abs=1e-14)

    def test_pairwise_difference_oracle(self, rng):
        # m2 equals half the mean absolute difference over unordered pairs
        for _ in range(100):
            data = random_positive_sample(rng, n=int(rng.integers(2, 200)))
            s = SortedSample.from_data(data)
            diffs = np.abs(s.values[:, None] - s.values[None, :])
            n = s.n
            oracle = diffs.sum() / (2 * n * (n - 1))  # half the off-diagonal mean
            assert sample_lmoments(s).m2 == pytest.approx(oracle, rel=1e-12, abs=1e-14)


class TestFitLM:
    def test_two_point_hand_value(self):
        r = fit_lm(SortedSample.from_data([1.0, 2.0]))
        expected_shape = math.log(2) / (math.log(3) - math.log(2))
        assert r.shape == pytest.approx(expected_shape, rel=1e-12)
        expected_scale = 1.5 / math.exp(float(gammaln(1 / expected_shape + 1)))
        assert r.scale == pytest.approx(expected_scale, rel=1e-12)

    def test_lifetime_dataset(self, lifetime_sample):
        r = fit_lm(lifetime_sample)
        assert r.shape == pytest.approx(4.9512, abs=0.005)
        assert r.scale == pytest.approx(26.9055, abs=0.005)

    def test_exponential_fixed_point(self):
        # {1, 3}: m1 = 2, m2 = 1, so m2/m1 = 1 - 2^(-1) and shape = 1 exactly
        r = fit_lm(SortedSample.from_data([1.0, 3.0]))
        assert r.shape == pytest.approx(1.0, rel=1e-14)

    def test_degenerate(self):
        with pytest.raises(DegenerateSampleError):
            fit_lm(SortedSample.from_data([2.0, 2.0, 2.0]))

    def test_consistency_large_sample(self):
        s = sample(WeibullParams(2.5, 2.5), 100_000, np.random.default_rng(99))
        r = fit_lm(s)
        assert r.shape == pytest.approx(2.5, rel=0.02)
        assert r.scale == pytest.approx(2.5, rel=0.02)


class TestFitMLM:
    def test_lifetime_dataset(self, lifetime_sample):
        r = fit_mlm(lifetime_sample)
        assert r.shape == pytest.approx(5.3119, abs=0.01)
        assert r.scale == pytest.approx(26.7771, abs=0.01)

    def test_unit_fixed_point(self):
        # two points whose log-variance is exactly pi^2/6 give shape 1
        gap = math.pi * math.sqrt(2.0 / 6.0)
        s = SortedSample.from_data([1.0, math.exp(gap)])
        assert fit_mlm(s).shape == pytest.approx(1.0, rel=1e-12)

    def test_degenerate(self):
        with pytest.raises(DegenerateSampleError):
            fit_mlm(SortedSample.from_data([5.0, 5.0]))


class TestFitPM:
    def test_self_consistency_against_quantile(self):
        # data placed at the exact model quantiles of the rule's plotting points
        n = 4001
        p = WeibullParams(2.0, 3.0)
        cfg = PercentileConfig(p=0.31, quantile_rule="median_unbiased")
        positions = (np.arange(1, n + 1) - 1 / 3) / (n + 1 / 3)
        s = SortedSample.from_data(quantile(p, positions))
        r = fit_pm(s, cfg)
        assert r.shape == pytest.approx(2.0, abs=1e-6)
        assert r.scale == pytest.approx(3.0, abs=1e-6)

    def test_lifetime_linear_rule(self, lifetime_sample):
        r = fit_pm(lifetime_sample, PercentileConfig(p=0.31, quantile_rule="linear"))
        assert r.shape == pytest.approx(5.9767, abs=0.005)
        assert r.scale == pytest.approx(25.8461, abs=0.005)

    def test_scale_equivariance(self, lifetime_sample):
        base = fit_pm(lifetime_sample)
        scaled = fit_pm(lifetime_sample.scaled(7.25))
        assert scaled.shape == pytest.approx(base.shape, rel=1e-12)
        assert scaled.scale == pytest.approx(7.25 * base.scale, rel=1e-12)

    def test_degenerate_quantiles(self):
        with pytest.raises(DegenerateSampleError):
            fit_pm(SortedSample.from_data([2.0, 2.0, 2.0, 2.0]))

    @pytest.mark.parametrize("p", [0.0, 0.6322, 0.9, -0.1])
    def test_config_validation(self, p):
        with pytest.raises(ValueError):
            PercentileConfig(p=p)

    def test_unknown_rule(self):
        with pytest.raises(ValueError):
            PercentileConfig(quantile_rule="nearest-ish")


class TestFitMM:
    def test_unit_cv_gives_exponential_shape(self):
        # x2/x1 = 3 + 2 sqrt(2) makes S^2 equal Xbar^2, the exponential CV
        s = SortedSample.from_data([1.0, 3.0 + 2.0 * math.sqrt(2.0)])
        assert fit_mm(s).shape == pytest.approx(1.0, abs=1e-8)

    def test_lifetime_dataset(self, lifetime_sample):
        r = fit_mm(lifetime_sample)
        assert r.shape == pytest.approx(4.9150, abs=0.01)
        assert r.scale == pytest.approx(26.9169, abs=0.01)

    def test_residual_oracle(self, rng):
        for _ in range(25):
            data = random_positive_sample(rng, n=int(rng.integers(3, 100)))
            s = SortedSample.from_data(data)
            try:
                r = fit_mm(s)
            except DegenerateSampleError:
                continue
            target = s.values.var(ddof=1) / s.values.mean() ** 2
            assert cv_ratio(r.shape) == pytest.approx(target, abs=1e-8, rel=1e-8)

    def test_cv_ratio_strictly_decreasing(self):
        grid = np.geomspace(0.05, 100.0, 220)
        values = [cv_ratio(a) for a in grid]
        assert all(a > b for a, b in zip(values, values[1:]))
        assert values[-1] > 0.0  # decreasing toward the limit, never crossing below 0

    def test_degenerate(self):
        with pytest.raises(DegenerateSampleError):
            fit_mm(SortedSample.from_data([1.0, 1.0, 1.0]))


class TestScaleEquivariance:
    @pytest.mark.parametrize("fitter", [fit_lm, fit_mlm, fit_mm])
    def test_closed_form_fitters(self, fitter, lifetime_sample):
        base = fitter(lifetime_sample)
        for c in (0.01, 5.0, 2000.0):
            scaled = fitter(lifetime_sample.scaled(c))
            tol = 1e-8 if fitter is fit_mm else 1e-12
            assert scaled.shape == pytest.approx(base.shape, rel=tol)
            assert scaled.scale == pytest.approx(c * base.scale, rel=tol)


class TestLogMoments:
    def test_matches_numpy(self, lifetime_sample):
        mom = log_moments(lifetime_sample)
        assert mom.mean_log == pytest.approx(float(np.mean(np.log(lifetime_sample.values))), rel=1e-15)
        assert mom.var_log == pytest.approx(float(np.var(np.log(lifetime_sample.values), ddof=1)), rel=1e-12)
