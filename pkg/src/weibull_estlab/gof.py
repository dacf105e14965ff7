"""Kolmogorov-Smirnov and Cramer-von Mises distances against a fitted model."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import SortedSample, WeibullParams, cdf

__all__ = ["GofReport", "ks_distance", "cvm_distance", "gof_report"]


@dataclass(frozen=True)
class GofReport:
    """Both distances for one fitted model on one dataset."""

    ks: float
    cvm: float
    n: int


def _ordered_values(data) -> np.ndarray:
    if isinstance(data, SortedSample):
        return data.values
    values = np.sort(np.asarray(data, dtype=float).reshape(-1))
    if values.size == 0:
        raise ValueError("need at least one observation")
    return values


def ks_distance(data, p: WeibullParams) -> float:
    """sup-norm distance: max over i of max{i/n - F(x_(i)), F(x_(i)) - (i-1)/n}."""
    x = _ordered_values(data)
    n = x.size
    f = cdf(p, x)
    i = np.arange(1, n + 1, dtype=float)
    return float(np.max(np.maximum(i / n - f, f - (i - 1) / n)))


def cvm_distance(data, p: WeibullParams) -> float:
    """Integrated-square distance: 1/(12n) + sum_i [(2i-1)/(2n) - F(x_(i))]^2.

    Bounded below by 1/(12n), attained exactly when F(x_(i)) = (2i-1)/(2n).
    """
    x = _ordered_values(data)
    n = x.size
    f = cdf(p, x)
    i = np.arange(1, n + 1, dtype=float)
    return float(1.0 / (12 * n) + np.sum(((2 * i - 1) / (2 * n) - f) ** 2))


def gof_report(data, p: WeibullParams) -> GofReport:
    x = _ordered_values(data)
    return GofReport(ks=ks_distance(x, p), cvm=cvm_distance(x, p), n=int(x.size))
