"""Closed-form and single-root classical estimators: LM, MLM, PM and MM."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .core import LOG_TWO, PSI_ONE, EstimateResult, SortedSample, gamma_fn
from .errors import DegenerateSampleError, InvalidRatioError
from .roots import solve_bracketed

__all__ = [
    "LMomentSummary",
    "LogMomentSummary",
    "PercentileConfig",
    "QUANTILE_RULES",
    "sample_lmoments",
    "log_moments",
    "fit_lm",
    "fit_mlm",
    "fit_pm",
    "fit_mm",
]

# numpy.quantile interpolation conventions exposed for the percentile method
QUANTILE_RULES = ("median_unbiased", "linear", "weibull", "hazen", "normal_unbiased")

_ANCHOR_P = 1.0 - math.exp(-1.0)  # the scale parameter is this percentile


@dataclass(frozen=True)
class LMomentSummary:
    """First two sample L-moments (data units)."""

    m1: float
    m2: float


@dataclass(frozen=True)
class LogMomentSummary:
    """Mean and (n-1)-divisor variance of the log-transformed data."""

    mean_log: float
    var_log: float


@dataclass(frozen=True)
class PercentileConfig:
    """Free percentile and empirical-quantile convention for the PM fit.

    ``p`` must lie in (0, 1 - e^-1): the upper anchor percentile is fixed at
    1 - e^-1 ~ 0.632, where the quantile equals the scale parameter.
    """

    p: float = 0.31
    quantile_rule: str = "median_unbiased"

    def __post_init__(self):
        if not 0.0 < self.p < _ANCHOR_P:
            raise ValueError(f"p must lie in (0, {_ANCHOR_P:.4f}), got {self.p}")
        if self.quantile_rule not in QUANTILE_RULES:
            raise ValueError(f"unknown quantile rule {self.quantile_rule!r}; choose from {QUANTILE_RULES}")


def sample_lmoments(s: SortedSample) -> LMomentSummary:
    """First two sample L-moments from the ordered data.

    m1 is the mean; m2 = [2/(n(n-1))] sum_i (i-1) x_(i) - m1 with 1-based
    ascending ranks, equal to half the mean absolute pairwise difference.
    """
    n = s.n
    m1 = float(s.values.mean())
    ranks = np.arange(n, dtype=float)  # (i - 1) for 1-based i
    m2 = 2.0 / (n * (n - 1)) * float(ranks @ s.values) - m1
    return LMomentSummary(m1=m1, m2=m2)


def log_moments(s: SortedSample) -> LogMomentSummary:
    return LogMomentSummary(
        mean_log=float(s.logs.mean()),
        var_log=float(s.logs.var(ddof=1)),
    )


def fit_lm(s: SortedSample) -> EstimateResult:
    """L-moment estimator.

    shape = -log 2 / log(1 - m2/m1), scale = m1 / Gamma(1/shape + 1).
    """
    lm = sample_lmoments(s)
    if lm.m2 == 0.0:
        raise DegenerateSampleError("second sample L-moment is zero (all observations equal)")
    ratio = lm.m2 / lm.m1
    if not 0.0 < ratio < 1.0:
        raise InvalidRatioError(f"m2/m1 = {ratio!r} outside (0, 1); cannot invert the L-moment equation")
    shape = -LOG_TWO / math.log1p(-ratio)
    scale = lm.m1 / gamma_fn(1.0 / shape + 1.0)
    return EstimateResult(method="LM", shape=shape, scale=scale)


def fit_mlm(s: SortedSample) -> EstimateResult:
    """Logarithmic-moment estimator.

    shape = sqrt(pi^2 / (6 S^2)) with the n-1 divisor for S^2;
    scale = exp(M1 - psi(1)/shape).
    """
    mom = log_moments(s)
    if mom.var_log == 0.0:
        raise DegenerateSampleError("log-variance is zero (all observations equal)")
    shape = math.sqrt(math.pi ** 2 / (6.0 * mom.var_log))
    scale = math.exp(mom.mean_log - PSI_ONE / shape)
    return EstimateResult(method="MLM", shape=shape, scale=scale)


def fit_pm(s: SortedSample, cfg: PercentileConfig | None = None) -> EstimateResult:
    """Percentile estimator at the configured lower percentile.

    scale = empirical quantile at 1 - e^-1;
    shape = log(-log(1 - p)) / (log x_p - log x_0.632).
    """
    cfg = cfg or PercentileConfig()
    x_p = float(np.quantile(s.values, cfg.p, method=cfg.quantile_rule))
    x_anchor = float(np.quantile(s.values, _ANCHOR_P, method=cfg.quantile_rule))
    if x_p == x_anchor:
        raise DegenerateSampleError(
            f"empirical quantiles at p={cfg.p} and {_ANCHOR_P:.4f} coincide ({x_p!r})"
        )
    shape = math.log(-math.log1p(-cfg.p)) / (math.log(x_p) - math.log(x_anchor))
    return EstimateResult(method="PM", shape=shape, scale=x_anchor)


def fit_mm(s: SortedSample) -> EstimateResult:
    """Method-of-moments estimator.

    The shape solves Gamma(1 + 2/a) / Gamma(1 + 1/a)^2 - 1 = S^2 / Xbar^2
    (a strictly decreasing left side, so the root is unique) by bracketed
    root finding from [0.05, 100] with geometric expansion; the scale is
    Xbar / Gamma(1/shape + 1).
    """
    xbar = float(s.values.mean())
    s2 = float(s.values.var(ddof=1))
    if s2 == 0.0:
        raise DegenerateSampleError("sample variance is zero (all observations equal)")
    target = s2 / xbar ** 2

    def residual(a: float) -> float:
        return math.exp(float(gammaln(1.0 + 2.0 / a) - 2.0 * gammaln(1.0 + 1.0 / a))) - 1.0 - target

    shape, diag = solve_bracketed(residual, 0.05, 100.0, xtol=1e-10)
    scale = xbar / gamma_fn(1.0 / shape + 1.0)
    return EstimateResult(
        method="MM",
        shape=shape,
        scale=scale,
        iterations=diag.iterations,
        residual=diag.residual,
        bracket=diag.bracket,
    )
