"""Uniform dispatch over the ten estimators, shared by the lab and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .classical import PercentileConfig, fit_lm, fit_mlm, fit_mm, fit_pm
from .core import EstimateResult, SortedSample
from .likelihood import WeightPair, fit_mle, fit_wmle
from .regression import DEFAULT_RULE, build_positions, fit_gls1, fit_gls2, fit_wls
from .ustat import fit_ustat

__all__ = ["METHOD_NAMES", "FitOptions", "fit_method", "register_method"]

METHOD_NAMES = ("USTAT", "MLE", "WMLE", "GLS1", "GLS2", "WLS", "LM", "MLM", "PM", "MM")


@dataclass(frozen=True)
class FitOptions:
    """Per-run knobs for the methods that take configuration."""

    plotting_rule: str = DEFAULT_RULE
    percentile: PercentileConfig = field(default_factory=PercentileConfig)
    gls1_design: str = "corrected"
    gls2_instrument: str = "corrected"


FitFunction = Callable[[SortedSample, FitOptions, WeightPair | None], EstimateResult]


def _positions(s: SortedSample, options: FitOptions):
    return build_positions(s.n, options.plotting_rule)


def _need_weights(weights: WeightPair | None) -> WeightPair:
    if weights is None:
        raise ValueError("WMLE requires a WeightPair for the sample size")
    return weights


_REGISTRY: dict[str, FitFunction] = {
    "USTAT": lambda s, o, w: fit_ustat(s),
    "MLE": lambda s, o, w: fit_mle(s),
    "WMLE": lambda s, o, w: fit_wmle(s, _need_weights(w)),
    "GLS1": lambda s, o, w: fit_gls1(s, _positions(s, o), design=o.gls1_design),
    "GLS2": lambda s, o, w: fit_gls2(s, _positions(s, o), instrument=o.gls2_instrument),
    "WLS": lambda s, o, w: fit_wls(s, _positions(s, o)),
    "LM": lambda s, o, w: fit_lm(s),
    "MLM": lambda s, o, w: fit_mlm(s),
    "PM": lambda s, o, w: fit_pm(s, o.percentile),
    "MM": lambda s, o, w: fit_mm(s),
}


def known_methods() -> tuple[str, ...]:
    return tuple(_REGISTRY)


def register_method(name: str, fn: FitFunction) -> None:
    """Add a custom estimator to the dispatch table (used by tests)."""
    _REGISTRY[name] = fn


def fit_method(
    name: str,
    s: SortedSample,
    options: FitOptions | None = None,
    weights: WeightPair | None = None,
) -> EstimateResult:
    """Fit one named method; raises KeyError for unknown names."""
    try:
        fn = _REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown method {name!r}; known: {', '.join(_REGISTRY)}")
    return fn(s, options or FitOptions(), weights)
