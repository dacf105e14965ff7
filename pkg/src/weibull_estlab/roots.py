"""Bracketed scalar root finding with geometric bracket expansion."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from scipy.optimize import brentq

from .errors import BracketError

__all__ = ["RootDiagnostics", "expand_bracket", "solve_bracketed"]


@dataclass(frozen=True)
class RootDiagnostics:
    iterations: int
    bracket: tuple[float, float]
    residual: float


def expand_bracket(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    factor: float = 10.0,
    max_expansions: int = 3,
) -> tuple[float, float, float, float]:
    """Grow [lo, hi] geometrically until f changes sign across it.

    Returns (lo, hi, f(lo), f(hi)). Raises BracketError after
    ``max_expansions`` symmetric expansions without a sign change.
    """
    flo, fhi = f(lo), f(hi)
    for _ in range(max_expansions + 1):
        if flo == 0.0 or fhi == 0.0 or (flo < 0.0) != (fhi < 0.0):
            return lo, hi, flo, fhi
        lo /= factor
        hi *= factor
        flo, fhi = f(lo), f(hi)
    raise BracketError(
        f"no sign change in [{lo}, {hi}] after {max_expansions} expansions "
        f"(f(lo)={flo:.6g}, f(hi)={fhi:.6g})"
    )


def solve_bracketed(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    xtol: float = 1e-10,
    factor: float = 10.0,
    max_expansions: int = 3,
) -> tuple[float, RootDiagnostics]:
    """Find a root of f inside the (expanded) bracket via Brent's method."""
    lo, hi, flo, fhi = expand_bracket(f, lo, hi, factor, max_expansions)
    if flo == 0.0:
        return lo, RootDiagnostics(0, (lo, hi), 0.0)
    if fhi == 0.0:
        return hi, RootDiagnostics(0, (lo, hi), 0.0)
    root, info = brentq(f, lo, hi, xtol=xtol, full_output=True)
    return float(root), RootDiagnostics(int(info.iterations), (lo, hi), float(f(root)))
