import math

import numpy as np
import pytest
from scipy.stats import gamma as gamma_dist

from weibull_estlab import (
    DegenerateSampleError,
    SortedSample,
    WeibullParams,
    WeightPair,
    fit_mle,
    fit_wmle,
    profile_score,
    sample,
    simulate_weight_medians,
)
from weibull_estlab.core import cdf, pdf
from weibull_estlab.likelihood import (
    WeightStore,
    read_weight_table,
    write_weight_table,
)

from conftest import random_positive_sample


def loglik_profile_oracle(values, alpha):
    """Full log-likelihood at (alpha, scale(alpha)); independent of the score path."""
    scale = (np.sum(values ** alpha) / values.size) ** (1.0 / alpha)
    return float(np.sum(np.log(pdf(WeibullParams(alpha, scale), values))))


def mle_grid_bisection_oracle(values, lo=0.1, hi=50.0):
    """Dense grid argmax of the profile likelihood refined by golden section."""
    grid = np.geomspace(lo, hi, 400)
    ll = np.array([loglik_profile_oracle(values, a) for a in grid])
    k = int(np.argmax(ll))
    a, b = grid[max(k - 1, 0)], grid[min(k + 1, grid.size - 1)]
    phi = (math.sqrt(5) - 1) / 2
    c, d = b - phi * (b - a), a + phi * (b - a)
    fc, fd = loglik_profile_oracle(values, c), loglik_profile_oracle(values, d)
    for _ in range(80):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = loglik_profile_oracle(values, c)
        else:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = loglik_profile_oracle(values, d)
    return (a + b) / 2


class TestProfileScore:
    def test_two_point_closed_form(self):
        s = SortedSample.from_data([1.0, math.e])
        for alpha in (0.3, 1.0, 2.7, 10.0):
            expected = 1 / alpha + 0.5 - math.exp(alpha) / (1 + math.exp(alpha))
            assert profile_score(s, alpha) == pytest.approx(expected, rel=1e-12, abs=1e-12)

    def test_strictly_decreasing(self, rng):
        grid = np.geomspace(1e-2, 1e2, 50)
        for _ in range(100):
            data = random_positive_sample(rng)
            if np.unique(data).size == 1:
                continue
            s = SortedSample.from_data(data)
            values = [profile_score(s, a) for a in grid]
            assert all(u > v for u, v in zip(values, values[1:]))

    def test_rejects_nonpositive_alpha(self, lifetime_sample):
        with pytest.raises(ValueError):
            profile_score(lifetime_sample, 0.0)


class TestFitMLE:
    def test_lifetime_dataset(self, lifetime_sample):
        r = fit_mle(lifetime_sample)
        assert r.shape == pytest.approx(4.5922, abs=0.005)
        assert r.scale == pytest.approx(26.9452, abs=0.005)
        assert abs(r.residual) < 1e-10

    def test_root_residual_small(self, rng):
        for _ in range(20):
            s = SortedSample.from_data(random_positive_sample(rng))
            r = fit_mle(s)
            assert abs(profile_score(s, r.shape)) < 1e-9

    def test_matches_grid_bisection_oracle(self, rng):
        for seed in range(8):
            s = sample(WeibullParams(2.0, 3.0), 60, np.random.default_rng(seed))
            ours = fit_mle(s).shape
            oracle = mle_grid_bisection_oracle(s.values)
            assert abs(ours - oracle) < 1e-6

    def test_scale_equivariance(self, lifetime_sample):
        base = fit_mle(lifetime_sample)
        for c in (0.05, 12.0):
            scaled = fit_mle(lifetime_sample.scaled(c))
            assert scaled.shape == pytest.approx(base.shape, rel=1e-8)
            assert scaled.scale == pytest.approx(c * base.scale, rel=1e-8)

    def test_degenerate_sample(self):
        with pytest.raises(DegenerateSampleError):
            fit_mle(SortedSample.from_data([2.0] * 5))

    def test_overflow_robustness(self):
        wide = SortedSample.from_data(np.geomspace(1e-8, 1e8, 40))
        r = fit_mle(wide)
        assert math.isfinite(r.shape) and math.isfinite(r.scale)
        # nearly-equal data drive the shape estimate past 50; still finite
        tight = SortedSample.from_data(np.geomspace(1.0, 1.05, 40))
        r2 = fit_mle(tight)
        assert r2.shape > 50.0 and math.isfinite(r2.scale)

    def test_stationarity_of_scale_equation(self, lifetime_sample):
        # at the fit, d(loglik)/d(scale) = 0 <=> sum((x/scale)^shape) = n
        r = fit_mle(lifetime_sample)
        z = (lifetime_sample.values / r.scale) ** r.shape
        assert float(z.sum()) == pytest.approx(lifetime_sample.n, rel=1e-10)


class TestWeightSimulation:
    def test_single_observation_median(self):
        # with n = 1 the first weight is Exp(1): median log 2
        pair = simulate_weight_medians(1, 100_000, np.random.default_rng(5))
        assert pair.w1 == pytest.approx(math.log(2), abs=0.01)
        assert pair.w2 == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("n", [5, 30])
    def test_gamma_quantile_oracle(self, n):
        pair = simulate_weight_medians(n, 100_000, np.random.default_rng(n))
        expected = float(gamma_dist.ppf(0.5, a=n, scale=1 / n))
        assert pair.w1 == pytest.approx(expected, abs=0.005)

    def test_asymptotic_limits(self):
        pair = simulate_weight_medians(10_000, 2_000, np.random.default_rng(3))
        assert pair.w1 == pytest.approx(1.0, abs=0.02)
        assert pair.w2 == pytest.approx(1.0, abs=0.02)

    def test_pivot_is_parameter_free(self):
        # medians from transformed true-model data equal the Exp(1) ones
        # within Monte Carlo error (4 x the combined median standard error)
        reps, n = 40_000, 12
        p = WeibullParams(0.5, 0.5)
        rng = np.random.default_rng(21)
        w1 = np.empty(reps)
        w2 = np.empty(reps)
        for r in range(reps):
            x = sample(p, n, rng).values
            e = -np.log1p(-cdf(p, x))
            log_e = np.log(e)
            w1[r] = e.mean()
            w2[r] = (e * log_e).sum() / e.sum() - log_e.mean()
        direct = simulate_weight_medians(n, reps, np.random.default_rng(22))
        for values, other in ((w1, direct.w1), (w2, direct.w2)):
            # ~1.25 sd/sqrt(reps) for a median of a roughly normal statistic
            se = 1.2533 * values.std(ddof=1) / math.sqrt(reps)
            assert abs(float(np.median(values)) - other) < 4 * math.sqrt(2) * se

    def test_validation(self):
        with pytest.raises(ValueError):
            simulate_weight_medians(0, 5000, np.random.default_rng(1))
        with pytest.raises(ValueError):
            simulate_weight_medians(5, 999, np.random.default_rng(1))


class TestFitWMLE:
    def test_unit_weights_reduce_to_mle(self, lifetime_sample):
        unit = WeightPair(w1=1.0, w2=1.0, n=48, replications=0)
        wmle = fit_wmle(lifetime_sample, unit)
        mle = fit_mle(lifetime_sample)
        assert wmle.shape == pytest.approx(mle.shape, rel=1e-10)
        assert wmle.scale == pytest.approx(mle.scale, rel=1e-10)

    def test_lifetime_dataset(self, lifetime_sample):
        weights = simulate_weight_medians(48, 100_000, np.random.default_rng(4817))
        r = fit_wmle(lifetime_sample, weights)
        assert r.shape == pytest.approx(4.5141, abs=0.05)
        assert r.scale == pytest.approx(26.9370, abs=0.05)

    def test_converges_to_mle(self):
        s = sample(WeibullParams(2.0, 3.0), 2000, np.random.default_rng(31))
        weights = simulate_weight_medians(2000, 20_000, np.random.default_rng(32))
        wmle = fit_wmle(s, weights)
        mle = fit_mle(s)
        assert abs(wmle.shape - mle.shape) < 0.01 * mle.shape

    def test_scale_equivariance(self, lifetime_sample):
        weights = simulate_weight_medians(48, 10_000, np.random.default_rng(77))
        base = fit_wmle(lifetime_sample, weights)
        scaled = fit_wmle(lifetime_sample.scaled(4.0), weights)
        assert scaled.shape == pytest.approx(base.shape, rel=1e-8)
        assert scaled.scale == pytest.approx(4.0 * base.scale, rel=1e-8)

    def test_sample_size_mismatch(self, lifetime_sample):
        with pytest.raises(ValueError):
            fit_wmle(lifetime_sample, WeightPair(w1=1.0, w2=1.0, n=10, replications=0))

    def test_degenerate(self):
        with pytest.raises(DegenerateSampleError):
            fit_wmle(SortedSample.from_data([1.0, 1.0]), WeightPair(1.0, 1.0, 2, 0))


class TestWeightTable:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "weights.txt"
        records = {
            5: (WeightPair(w1=0.935058123456, w2=0.705061234567, n=5, replications=100000), 42),
            48: (WeightPair(w1=0.993672, w2=0.968697, n=48, replications=100000), 42),
        }
        write_weight_table(path, records)
        back = read_weight_table(path)
        assert back.keys() == records.keys()
        for n in records:
            pair, seed = back[n]
            assert seed == records[n][1]
            assert pair.replications == records[n][0].replications
            # 12 significant digits survive the text round trip
            assert pair.w1 == pytest.approx(records[n][0].w1, rel=1e-11)
            assert pair.w2 == pytest.approx(records[n][0].w2, rel=1e-11)

    def test_read_rejects_malformed(self, tmp_path):
        path = tmp_path / "weights.txt"
        path.write_text("5 0.9 0.7\n")
        with pytest.raises(ValueError, match="expected 5 fields"):
            read_weight_table(path)

    def test_store_simulates_then_caches(self, tmp_path):
        path = tmp_path / "weights.txt"
        store = WeightStore(path=path, replications=1000, seed=9)
        pair = store.get(6)
        assert path.exists()
        # a second store reads the file instead of re-simulating
        # (12 significant digits survive the text round trip)
        other = WeightStore(path=path, replications=1000, seed=9)
        cached = other.get(6)
        assert cached.w1 == pytest.approx(pair.w1, rel=1e-11)
        assert cached.w2 == pytest.approx(pair.w2, rel=1e-11)
        assert cached.replications == pair.replications

    def test_store_respects_env_default(self, tmp_path, monkeypatch):
        target = tmp_path / "env-weights.txt"
        monkeypatch.setenv("WEIBULL_ESTLAB_WEIGHTS", str(target))
        store = WeightStore(replications=1000, seed=3)
        store.get(5)
        assert target.exists()
