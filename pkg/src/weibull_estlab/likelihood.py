"""Maximum likelihood and median-weighted maximum likelihood.

The shape MLE is the root of the profile score

    g(a) = 1/a + mean(log x) - sum(x^a log x) / sum(x^a),

which is strictly decreasing in a for any non-degenerate sample, and the
scale follows as (sum(x^a)/n)^(1/a). Powers are evaluated as
exp(a * (log x - max log x)) so samples spanning many orders of magnitude
cannot overflow.

The weighted variant replaces 1/a by w2/a and rescales the scale equation by
1/w1, where (w1, w2) are medians of two pivotal statistics. Writing
E = -log(1 - F(X)) ~ Exp(1) under the true model,

    W1 = mean(E_i)
    W2 = sum(E_i log E_i) / sum(E_i) - mean(log E_i),

so both medians depend on the sample size only and are estimated once per n
by simulating standard exponentials. n * W1 is Gamma(n, 1); both medians
tend to 1 as n grows, which is why the weighted fit converges to the MLE.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import minimize_scalar

from .classical import log_moments
from .core import EstimateResult, SortedSample
from .errors import BracketError, DegenerateSampleError, EstimationError
from .roots import solve_bracketed

__all__ = [
    "WeightPair",
    "profile_score",
    "fit_mle",
    "fit_wmle",
    "simulate_weight_medians",
    "read_weight_table",
    "write_weight_table",
    "default_weights_path",
    "WeightStore",
]

WEIGHTS_ENV_VAR = "WEIBULL_ESTLAB_WEIGHTS"
DEFAULT_WEIGHT_REPLICATIONS = 100_000

# bracket seeded from the closed-form log-moment estimate, then widened
_BRACKET_SEED = (0.2, 5.0)


@dataclass(frozen=True)
class WeightPair:
    """Median weights for one sample size and the simulation that made them."""

    w1: float
    w2: float
    n: int
    replications: int


def _log_weighted_mean(logs: np.ndarray, alpha: float) -> tuple[float, float]:
    """(sum x^a log x / sum x^a, log(sum x^a) - max-log rescaling base)."""
    top = logs[-1]  # logs ascending
    w = np.exp(alpha * (logs - top))
    sw = float(w.sum())
    return float((w @ logs) / sw), alpha * top + math.log(sw)


def profile_score(s: SortedSample, alpha: float) -> float:
    """g(alpha) = 1/alpha + mean(log x) - sum(x^a log x)/sum(x^a)."""
    if alpha <= 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    weighted_mean, _ = _log_weighted_mean(s.logs, alpha)
    return 1.0 / alpha + float(s.logs.mean()) - weighted_mean


def _scale_at(s: SortedSample, alpha: float, w1: float = 1.0) -> float:
    """(sum x^a / (n w1))^(1/a), overflow-safe."""
    _, log_sum = _log_weighted_mean(s.logs, alpha)
    return math.exp((log_sum - math.log(s.n * w1)) / alpha)


def _seed_bracket(s: SortedSample) -> tuple[float, float]:
    mom = log_moments(s)
    if mom.var_log == 0.0:
        raise DegenerateSampleError("all observations equal; likelihood has no interior maximum")
    seed = math.sqrt(math.pi ** 2 / (6.0 * mom.var_log))
    return _BRACKET_SEED[0] * seed, _BRACKET_SEED[1] * seed


def fit_mle(s: SortedSample) -> EstimateResult:
    """Maximum likelihood fit via the profile-score root."""
    lo, hi = _seed_bracket(s)
    shape, diag = solve_bracketed(lambda a: profile_score(s, a), lo, hi, xtol=1e-10)
    scale = _scale_at(s, shape)
    return EstimateResult(
        method="MLE",
        shape=shape,
        scale=scale,
        iterations=diag.iterations,
        residual=diag.residual,
        bracket=diag.bracket,
    )


def fit_wmle(s: SortedSample, weights: WeightPair) -> EstimateResult:
    """Median-weighted maximum likelihood fit.

    The shape minimizes (w2/a + mean(log x) - sum(x^a log x)/sum(x^a))^2;
    when the inner expression changes sign (it always does for w2 > 0) the
    minimizer is its root and is found by the same bracketed scheme,
    otherwise a bounded scalar minimization over the expanded bracket is
    used. The scale is (sum(x^a) / (n w1))^(1/a).
    """
    if weights.n != s.n:
        raise ValueError(f"weights were simulated for n={weights.n}, sample has n={s.n}")
    mean_log = float(s.logs.mean())

    def inner(a: float) -> float:
        weighted_mean, _ = _log_weighted_mean(s.logs, a)
        return weights.w2 / a + mean_log - weighted_mean

    lo, hi = _seed_bracket(s)
    notes: tuple[str, ...] = ()
    try:
        shape, diag = solve_bracketed(inner, lo, hi, xtol=1e-10)
        iterations, residual, bracket = diag.iterations, diag.residual, diag.bracket
    except BracketError:
        span = (lo / 1000.0, hi * 1000.0)
        opt = minimize_scalar(lambda a: inner(a) ** 2, bounds=span, method="bounded",
                              options={"xatol": 1e-10})
        if not opt.success:
            raise EstimationError(f"weighted-likelihood minimization failed: {opt.message}")
        shape = float(opt.x)
        iterations, residual, bracket = int(opt.nfev), float(inner(shape)), span
        notes = ("no sign change; squared objective minimized over the expanded bracket",)
    scale = _scale_at(s, shape, weights.w1)
    return EstimateResult(
        method="WMLE",
        shape=shape,
        scale=scale,
        iterations=iterations,
        residual=residual,
        bracket=bracket,
        notes=notes,
    )


def simulate_weight_medians(n: int, replications: int, rng: np.random.Generator) -> WeightPair:
    """Estimate the median weights for sample size n from Exp(1) draws.

    The statistics are pivotal under the true model, so no Weibull
    parameters enter. Draws are consumed replication-by-replication in a
    fixed order, so the result depends only on the generator state.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if replications < 1000:
        raise ValueError(f"need at least 1000 replications, got {replications}")
    w1 = np.empty(replications)
    w2 = np.empty(replications)
    chunk = max(1, (1 << 22) // max(n, 1))  # cap draw blocks at ~32 MB
    done = 0
    while done < replications:
        k = min(chunk, replications - done)
        e = rng.standard_exponential((k, n))
        log_e = np.log(e)
        w1[done:done + k] = e.mean(axis=1)
        w2[done:done + k] = (e * log_e).sum(axis=1) / e.sum(axis=1) - log_e.mean(axis=1)
        done += k
    return WeightPair(
        w1=float(np.median(w1)),
        w2=float(np.median(w2)),
        n=n,
        replications=replications,
    )


# --- weight-table cache file: one record per line,
# --- "n w1 w2 replications seed", 12 significant digits

def default_weights_path() -> Path:
    env = os.environ.get(WEIGHTS_ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "weibull_estlab" / "weights.txt"


def read_weight_table(path: Path) -> dict[int, tuple[WeightPair, int]]:
    """Parse the cache file into {n: (WeightPair, seed)}; later records win."""
    records: dict[int, tuple[WeightPair, int]] = {}
    if not path.exists():
        return records
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 5:
            raise ValueError(f"{path}:{lineno}: expected 5 fields, got {len(parts)}")
        n, reps, seed = int(parts[0]), int(parts[3]), int(parts[4])
        records[n] = (WeightPair(w1=float(parts[1]), w2=float(parts[2]), n=n, replications=reps), seed)
    return records


def write_weight_table(path: Path, records: dict[int, tuple[WeightPair, int]]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = []
    for n in sorted(records):
        pair, seed = records[n]
        lines.append(f"{n} {pair.w1:.12g} {pair.w2:.12g} {pair.replications} {seed}")
    path.write_text("\n".join(lines) + ("\n" if lines else ""))


class WeightStore:
    """Memoized weight lookup backed by the cache file.

    Missing sample sizes are simulated on demand from a substream derived
    from (seed, n) and appended to the cache (best effort; a read-only
    location just skips the write).
    """

    def __init__(self, path: Path | None = None, replications: int = DEFAULT_WEIGHT_REPLICATIONS,
                 seed: int = 0):
        self.path = path or default_weights_path()
        self.replications = replications
        self.seed = seed
        self._memo: dict[int, WeightPair] = {}

    def get(self, n: int) -> WeightPair:
        if n in self._memo:
            return self._memo[n]
        records = read_weight_table(self.path)
        if n in records:
            pair = records[n][0]
        else:
            rng = np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=(1, n)))
            pair = simulate_weight_medians(n, self.replications, rng)
            records[n] = (pair, self.seed)
            try:
                write_weight_table(self.path, records)
            except OSError:
                pass
        self._memo[n] = pair
        return pair
