import numpy as np
import pytest

from weibull_estlab import (
    WeibullParams,
    cvm_distance,
    gof_report,
    ks_distance,
    quantile,
)


class TestKs:
    def test_centered_plotting_points(self):
        n = 37
        p = WeibullParams(1.7, 4.0)
        x = quantile(p, (2 * np.arange(1, n + 1) - 1) / (2 * n))
        assert ks_distance(x, p) == pytest.approx(1 / (2 * n), abs=1e-12)

    def test_single_point_at_median(self):
        p = WeibullParams(2.0, 3.0)
        assert ks_distance([quantile(p, 0.5)], p) == pytest.approx(0.5, abs=1e-12)

    def test_accepts_sorted_sample(self, lifetime_sample):
        p = WeibullParams(4.5922, 26.9452)
        direct = ks_distance(lifetime_sample.values, p)
        assert ks_distance(lifetime_sample, p) == direct

    def test_invariant_under_power_transform(self, lifetime_sample):
        p = WeibullParams(4.5922, 26.9452)
        base = ks_distance(lifetime_sample, p)
        for k in (0.5, 2.0, 3.0):
            transformed = lifetime_sample.values ** k
            q = WeibullParams(p.shape / k, p.scale ** k)
            assert ks_distance(transformed, q) == pytest.approx(base, abs=1e-12)


class TestCvm:
    def test_minimum_attained(self):
        n = 23
        p = WeibullParams(0.8, 2.0)
        x = quantile(p, (2 * np.arange(1, n + 1) - 1) / (2 * n))
        assert cvm_distance(x, p) == pytest.approx(1 / (12 * n), rel=1e-10)

    def test_lower_bound_fuzz(self, rng):
        for _ in range(1000):
            n = int(rng.integers(1, 50))
            data = np.exp(rng.normal(0, 1, n))
            p = WeibullParams(rng.uniform(0.2, 8.0), rng.uniform(0.1, 20.0))
            assert cvm_distance(data, p) >= 1 / (12 * n) - 1e-15

    def test_continuity_in_parameters(self, lifetime_sample):
        p = WeibullParams(4.5922, 26.9452)
        q = WeibullParams(4.5922 + 1e-9, 26.9452 - 1e-9)
        assert abs(cvm_distance(lifetime_sample, p) - cvm_distance(lifetime_sample, q)) < 1e-6
        assert abs(ks_distance(lifetime_sample, p) - ks_distance(lifetime_sample, q)) < 1e-6


class TestReport:
    def test_report_bundles_both(self, lifetime_sample):
        p = WeibullParams(4.7099, 26.6979)
        rep = gof_report(lifetime_sample, p)
        assert rep.n == 48
        assert rep.ks == ks_distance(lifetime_sample, p)
        assert rep.cvm == cvm_distance(lifetime_sample, p)

    def test_empty_input_rejected(self):
        with pytest.raises(ValueError):
            ks_distance([], WeibullParams(1, 1))
