"""Probability-plot regression estimators: GLS type 1, GLS type 2 and WLS.

Ordered observations satisfy the regression

    log x_(i) = log scale + (1/shape) * t_i,    t_i = log(-log(1 - F_i)),

with F_i an empirical plotting position. The responses are correlated, so
the generalized fit weights by the inverse of the order-statistic covariance
surrogate

    v_ij = [i / (n+1-i)] * d_i * d_j,   d_k = 1 / (log(n+1-k) - log(n+1)),

for i <= j (all entries positive: both log differences are negative). The
systems are solved through a Cholesky factorization of V, never by forming
the inverse; the factorization is cached per n.

Two second design columns are available. "plain" is the plug-in transform
t_i itself. "corrected" replaces t_i with its second-order mean
approximation

    z_i = t_i + F_i (1 - F_i) / (n + 2) * h''(F_i),
    h(u) = log(-log(1 - u)),

which removes most of the small-sample bias of the plug-in column and is
the default for both generalized fits. The type-2 fit instruments the plain
design with the corrected column; an older additive-offset instrument is
retained as the "legacy" option for comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .core import EstimateResult, SortedSample
from .errors import DegenerateSampleError, SingularSystemError

__all__ = [
    "PLOTTING_RULES",
    "DEFAULT_RULE",
    "PlottingPositions",
    "GlsSystem",
    "build_positions",
    "build_v",
    "v_diagonal",
    "plot_transform",
    "mean_corrected_transform",
    "legacy_instrument_transform",
    "build_system",
    "fit_gls1",
    "fit_gls2",
    "fit_wls",
]

PLOTTING_RULES = ("i/(n+1)", "(i-0.3)/(n+0.4)")
DEFAULT_RULE = "i/(n+1)"


@dataclass(frozen=True)
class PlottingPositions:
    """Strictly increasing surrogate values for F at the order statistics."""

    rule: str
    values: np.ndarray

    @property
    def n(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class GlsSystem:
    """Assembled regression system for one sample and plotting rule."""

    design_x: np.ndarray   # [1, t_i]
    design_z: np.ndarray   # [1, z_i] mean-corrected column
    response_y: np.ndarray
    cov_v: np.ndarray
    weights_w: np.ndarray  # diag of cov_v


def build_positions(n: int, rule: str = DEFAULT_RULE) -> PlottingPositions:
    """Plotting positions for sample size n under the chosen rule."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    i = np.arange(1, n + 1, dtype=float)
    if rule == "i/(n+1)":
        values = i / (n + 1)
    elif rule == "(i-0.3)/(n+0.4)":
        values = (i - 0.3) / (n + 0.4)
    else:
        raise ValueError(f"unknown plotting rule {rule!r}; choose from {PLOTTING_RULES}")
    values.flags.writeable = False
    return PlottingPositions(rule=rule, values=values)


def _log_ratio_terms(n: int) -> np.ndarray:
    i = np.arange(1, n + 1, dtype=float)
    return 1.0 / (np.log(n + 1 - i) - math.log(n + 1))


def build_v(n: int) -> np.ndarray:
    """Covariance surrogate V; symmetric with every entry positive."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    i = np.arange(1, n + 1, dtype=float)
    ratio = i / (n + 1 - i)
    d = _log_ratio_terms(n)
    # ratio is increasing, so the i<=j entry ratio[min(i,j)] is minimum.outer
    return np.minimum.outer(ratio, ratio) * np.outer(d, d)


def v_diagonal(n: int) -> np.ndarray:
    i = np.arange(1, n + 1, dtype=float)
    return i / (n + 1 - i) * _log_ratio_terms(n) ** 2


@lru_cache(maxsize=4)
def _cholesky_v(n: int):
    try:
        return cho_factor(build_v(n), lower=True)
    except LinAlgError as exc:
        raise SingularSystemError(f"covariance surrogate for n={n} is not positive definite: {exc}")


@dataclass(frozen=True)
class _GlsOperator:
    """Per-(n, rule) precomputation: designs, V^-1 @ columns and 2x2 blocks.

    The designs are data-independent, so repeated fits at one sample size
    (the simulation lab's hot path) reduce to O(n) dot products against the
    cached V^-1-transformed columns; the Cholesky factorization happens once
    per n.
    """

    design_x: np.ndarray
    design_z: np.ndarray
    design_legacy: np.ndarray
    vi_x: np.ndarray
    vi_z: np.ndarray
    vi_legacy: np.ndarray
    lhs_xx: np.ndarray
    lhs_zz: np.ndarray
    lhs_zx: np.ndarray
    lhs_legacy_x: np.ndarray
    inv_w: np.ndarray


@lru_cache(maxsize=8)
def _gls_operator(n: int, rule: str) -> _GlsOperator:
    p = build_positions(n, rule).values
    ones = np.ones(n)
    x = np.column_stack([ones, plot_transform(p)])
    z = np.column_stack([ones, mean_corrected_transform(p, n)])
    legacy = np.column_stack([ones, legacy_instrument_transform(p)])
    factor = _cholesky_v(n)
    vi_x = cho_solve(factor, x)
    vi_z = cho_solve(factor, z)
    vi_legacy = cho_solve(factor, legacy)
    return _GlsOperator(
        design_x=x,
        design_z=z,
        design_legacy=legacy,
        vi_x=vi_x,
        vi_z=vi_z,
        vi_legacy=vi_legacy,
        lhs_xx=x.T @ vi_x,
        lhs_zz=z.T @ vi_z,
        lhs_zx=z.T @ vi_x,
        lhs_legacy_x=legacy.T @ vi_x,
        inv_w=1.0 / v_diagonal(n),
    )


def plot_transform(positions: np.ndarray) -> np.ndarray:
    """t = log(-log(1 - F)); strictly increasing in F."""
    return np.log(-np.log1p(-positions))


def _curvature(positions: np.ndarray) -> np.ndarray:
    """h''(F) for h(u) = log(-log(1 - u))."""
    log1mf = np.log1p(-positions)
    return (-log1mf - 1.0) / ((1.0 - positions) * log1mf) ** 2


def mean_corrected_transform(positions: np.ndarray, n: int) -> np.ndarray:
    """Second-order approximation to E[t(U_(i))]: t(F) + Var(U_(i)) h''(F)."""
    var_u = positions * (1.0 - positions) / (n + 2)
    return plot_transform(positions) + var_u * _curvature(positions)


def legacy_instrument_transform(positions: np.ndarray) -> np.ndarray:
    """Older additive-offset instrument column:

    t(F) - 0.5 - log(1-F) / ((1-F) log(1-F))^2.
    """
    log1mf = np.log1p(-positions)
    return plot_transform(positions) - 0.5 - log1mf / ((1.0 - positions) * log1mf) ** 2


def build_system(s: SortedSample, positions: PlottingPositions | None = None) -> GlsSystem:
    pos = positions or build_positions(s.n)
    if pos.n != s.n:
        raise ValueError(f"positions built for n={pos.n}, sample has n={s.n}")
    p = pos.values
    ones = np.ones(s.n)
    return GlsSystem(
        design_x=np.column_stack([ones, plot_transform(p)]),
        design_z=np.column_stack([ones, mean_corrected_transform(p, s.n)]),
        response_y=s.logs,
        cov_v=build_v(s.n),
        weights_w=v_diagonal(s.n),
    )


def _tie_notes(s: SortedSample) -> tuple[str, ...]:
    ties = int(np.sum(np.diff(s.values) == 0.0))
    if not ties:
        return ()
    return (f"{ties} tied adjacent pair{'s' if ties > 1 else ''} in the data",)


def _back_transform(method: str, b: np.ndarray, notes: tuple[str, ...],
                    residual: float = 0.0) -> EstimateResult:
    intercept, slope = float(b[0]), float(b[1])
    if slope <= 0.0:
        raise DegenerateSampleError(f"fitted slope {slope!r} is not positive; shape undefined")
    return EstimateResult(
        method=method,
        shape=1.0 / slope,
        scale=math.exp(intercept),
        residual=residual,
        notes=notes,
    )


def _solve_2x2(lhs: np.ndarray, rhs: np.ndarray, what: str) -> np.ndarray:
    try:
        b = np.linalg.solve(lhs, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"{what}: {exc}")
    if not np.all(np.isfinite(b)):
        raise SingularSystemError(f"{what}: non-finite solution {b!r}")
    return b


def _operator_for(s: SortedSample, positions: PlottingPositions | None) -> _GlsOperator:
    if positions is None:
        return _gls_operator(s.n, DEFAULT_RULE)
    if positions.n != s.n:
        raise ValueError(f"positions built for n={positions.n}, sample has n={s.n}")
    # the fit uses the cached rule-derived columns, so reject hand-rolled vectors
    if not np.array_equal(positions.values, build_positions(s.n, positions.rule).values):
        raise ValueError("positions do not match their declared rule; use build_positions")
    return _gls_operator(s.n, positions.rule)


def fit_gls1(s: SortedSample, positions: PlottingPositions | None = None,
             design: str = "corrected") -> EstimateResult:
    """Type-1 generalized least squares: (M' V^-1 M) b = M' V^-1 y.

    ``design`` picks the second column of M: "corrected" (default; the
    variant that reproduces the published estimates) or "plain" (the raw
    plug-in transform t_i).
    """
    op = _operator_for(s, positions)
    if design == "corrected":
        lhs, vi_m = op.lhs_zz, op.vi_z
    elif design == "plain":
        lhs, vi_m = op.lhs_xx, op.vi_x
    else:
        raise ValueError(f"unknown design {design!r}; choose 'corrected' or 'plain'")
    rhs = vi_m.T @ s.logs
    b = _solve_2x2(lhs, rhs, "GLS1 normal equations")
    residual = float(np.max(np.abs(lhs @ b - rhs)))
    return _back_transform("GLS1", b, _tie_notes(s), residual)


def fit_gls2(s: SortedSample, positions: PlottingPositions | None = None,
             instrument: str = "corrected") -> EstimateResult:
    """Type-2 (instrumented) fit: (Z' V^-1 X) b = Z' V^-1 y.

    ``instrument`` picks Z's second column: "corrected" (default) or
    "legacy" (the additive-offset form, kept for comparison).
    """
    op = _operator_for(s, positions)
    if instrument == "corrected":
        lhs, vi_z = op.lhs_zx, op.vi_z
    elif instrument == "legacy":
        lhs, vi_z = op.lhs_legacy_x, op.vi_legacy
    else:
        raise ValueError(f"unknown instrument {instrument!r}; choose 'corrected' or 'legacy'")
    rhs = vi_z.T @ s.logs
    b = _solve_2x2(lhs, rhs, "GLS2 instrument equations")
    residual = float(np.max(np.abs(lhs @ b - rhs)))
    return _back_transform("GLS2", b, _tie_notes(s), residual)


def fit_wls(s: SortedSample, positions: PlottingPositions | None = None) -> EstimateResult:
    """Weighted least squares with the diagonal of V: (X' W^-1 X) b = X' W^-1 y."""
    op = _operator_for(s, positions)
    xw = op.design_x * op.inv_w[:, None]
    lhs = xw.T @ op.design_x
    rhs = xw.T @ s.logs
    b = _solve_2x2(lhs, rhs, "WLS normal equations")
    residual = float(np.max(np.abs(lhs @ b - rhs)))
    return _back_transform("WLS", b, _tie_notes(s), residual)
