"""Monte Carlo comparison lab: bias and RMSE of the estimators over a grid.

One experiment cell is a (sample size, parameter level) pair. Every
replication of a cell draws one sample from a substream derived
deterministically from (master seed, cell index, replication index) and fits
every requested method on that same sample (common random numbers), so the
output is bit-identical for any worker count: per-replication estimates are
materialized into arrays indexed by replication and reduced in fixed order.

Estimator failures (degenerate samples at tiny n, bracket failures) never
abort a run; they are excluded from the metrics and counted per cell.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import WeibullParams, sample
from .errors import EstimationError
from .likelihood import WeightPair, simulate_weight_medians
from .methods import FitOptions, fit_method, known_methods

__all__ = [
    "METRICS",
    "RANK_TARGETS",
    "SimulationConfig",
    "MetricRow",
    "MetricTable",
    "default_replications",
    "run_experiment",
    "rank_methods",
    "emit_plot_data",
    "write_metric_csv",
    "CSV_HEADER",
]

METRICS = ("BIAS", "RMSE", "BOTH")
RANK_TARGETS = ("ALPHA_BIAS", "BETA_BIAS", "ALPHA_RMSE", "BETA_RMSE")
CSV_HEADER = "method,n,alpha,beta,bias_alpha,bias_beta,rmse_alpha,rmse_beta,reps,failures"

DEFAULT_SEED = 1729
DEFAULT_WEIGHT_REPLICATIONS = 100_000

# reserved substream families under the master seed
_SK_REPLICATION = 0
_SK_WEIGHTS = 1

_CHUNK = 256  # replications per worker task; fixed so chunking never depends on workers


def default_replications(n: int) -> int:
    """Desk-scale default: enough to push the Monte Carlo error below the
    differences under comparison without hour-long runs."""
    return 10_000 if n <= 200 else 2_000


@dataclass(frozen=True)
class SimulationConfig:
    """Experiment grid: methods x sample sizes x parameter levels."""

    methods: tuple[str, ...]
    sample_sizes: tuple[int, ...]
    param_levels: tuple[WeibullParams, ...]
    replications: int | None = None  # None: per-n default_replications rule
    master_seed: int = DEFAULT_SEED
    metric: str = "BOTH"
    workers: int = 1
    options: FitOptions = field(default_factory=FitOptions)
    weight_replications: int = DEFAULT_WEIGHT_REPLICATIONS

    def __post_init__(self):
        object.__setattr__(self, "methods", tuple(self.methods))
        object.__setattr__(self, "sample_sizes", tuple(int(n) for n in self.sample_sizes))
        levels = tuple(
            lv if isinstance(lv, WeibullParams) else WeibullParams(*lv)
            for lv in self.param_levels
        )
        object.__setattr__(self, "param_levels", levels)
        if not self.methods:
            raise ValueError("methods must be nonempty")
        unknown = [m for m in self.methods if m not in known_methods()]
        if unknown:
            raise ValueError(f"unknown methods: {unknown}; known: {known_methods()}")
        if not self.sample_sizes or any(n < 2 for n in self.sample_sizes):
            raise ValueError("sample_sizes must be nonempty with every n >= 2")
        if not levels:
            raise ValueError("param_levels must be nonempty")
        if self.replications is not None and self.replications < 100:
            raise ValueError(f"replications must be >= 100, got {self.replications}")
        if self.metric not in METRICS:
            raise ValueError(f"metric must be one of {METRICS}, got {self.metric!r}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        if self.weight_replications < 1000:
            raise ValueError("weight_replications must be >= 1000")

    def cells(self) -> list[tuple[int, int, WeibullParams]]:
        """(cell index, n, level) in deterministic grid order."""
        out = []
        idx = 0
        for n in self.sample_sizes:
            for level in self.param_levels:
                out.append((idx, n, level))
                idx += 1
        return out


@dataclass(frozen=True)
class MetricRow:
    method: str
    n: int
    alpha: float
    beta: float
    bias_alpha: float
    bias_beta: float
    rmse_alpha: float
    rmse_beta: float
    reps: int
    failures: int


@dataclass(frozen=True)
class MetricTable:
    """Rows in (method, n, level) config order plus cells that never succeeded."""

    rows: tuple[MetricRow, ...]
    metric: str = "BOTH"
    skipped: tuple[tuple[str, int, float, float, int], ...] = ()


def _replication_rng(master_seed: int, cell: int, rep: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence(master_seed, spawn_key=(_SK_REPLICATION, cell, rep))
    )


def _run_chunk(args) -> tuple[int, int, np.ndarray]:
    """Fit all methods on replications [start, stop) of one cell.

    Returns (cell index, start, estimates[stop-start, n_methods, 2]) with
    NaN rows marking failures.
    """
    (cell, n, shape, scale, methods, options, weights, master_seed, start, stop) = args
    level = WeibullParams(shape, scale)
    est = np.full((stop - start, len(methods), 2), np.nan)
    for r in range(start, stop):
        rng = _replication_rng(master_seed, cell, r)
        s = sample(level, n, rng)
        for m, name in enumerate(methods):
            try:
                fit = fit_method(name, s, options, weights)
            except EstimationError:
                continue
            est[r - start, m, 0] = fit.shape
            est[r - start, m, 1] = fit.scale
    return cell, start, est


def _weight_medians_for(cfg: SimulationConfig) -> dict[int, WeightPair]:
    if "WMLE" not in cfg.methods:
        return {}
    out = {}
    for n in cfg.sample_sizes:
        rng = np.random.default_rng(
            np.random.SeedSequence(cfg.master_seed, spawn_key=(_SK_WEIGHTS, n))
        )
        out[n] = simulate_weight_medians(n, cfg.weight_replications, rng)
    return out


def run_experiment(cfg: SimulationConfig) -> MetricTable:
    """Run the full grid and reduce to bias/RMSE per (method, cell)."""
    weights_by_n = _weight_medians_for(cfg)
    cells = cfg.cells()
    estimates: dict[int, np.ndarray] = {}
    tasks = []
    for cell, n, level in cells:
        reps = cfg.replications or default_replications(n)
        estimates[cell] = np.empty((reps, len(cfg.methods), 2))
        for start in range(0, reps, _CHUNK):
            stop = min(start + _CHUNK, reps)
            tasks.append((cell, n, level.shape, level.scale, cfg.methods, cfg.options,
                          weights_by_n.get(n), cfg.master_seed, start, stop))

    if cfg.workers == 1:
        results = map(_run_chunk, tasks)
    else:
        pool = ProcessPoolExecutor(max_workers=cfg.workers)
        try:
            results = list(pool.map(_run_chunk, tasks, chunksize=1))
        finally:
            pool.shutdown()
    for cell, start, est in results:
        estimates[cell][start:start + est.shape[0]] = est

    rows: list[MetricRow] = []
    skipped: list[tuple[str, int, float, float, int]] = []
    for method_index, method in enumerate(cfg.methods):
        for cell, n, level in cells:
            est = estimates[cell][:, method_index, :]
            reps = est.shape[0]
            ok = np.isfinite(est).all(axis=1)
            successes = int(ok.sum())
            failures = reps - successes
            if successes == 0:
                skipped.append((method, n, level.shape, level.scale, failures))
                continue
            shape_hat = est[ok, 0]
            scale_hat = est[ok, 1]
            rows.append(MetricRow(
                method=method,
                n=n,
                alpha=level.shape,
                beta=level.scale,
                bias_alpha=float(shape_hat.mean() - level.shape),
                bias_beta=float(scale_hat.mean() - level.scale),
                rmse_alpha=float(np.sqrt(np.mean((shape_hat - level.shape) ** 2))),
                rmse_beta=float(np.sqrt(np.mean((scale_hat - level.scale) ** 2))),
                reps=successes,
                failures=failures,
            ))
    return MetricTable(rows=tuple(rows), metric=cfg.metric, skipped=tuple(skipped))


_TARGET_FIELDS = {
    "ALPHA_BIAS": "bias_alpha",
    "BETA_BIAS": "bias_beta",
    "ALPHA_RMSE": "rmse_alpha",
    "BETA_RMSE": "rmse_beta",
}


def rank_methods(
    table: MetricTable,
    target: str,
    n: int | None = None,
    level: WeibullParams | None = None,
) -> list[tuple[str, float]]:
    """Methods of one cell ordered by |target metric|, ties broken by name.

    ``n`` and ``level`` may be omitted when the table holds a single cell.
    """
    if target not in _TARGET_FIELDS:
        raise ValueError(f"target must be one of {RANK_TARGETS}, got {target!r}")
    rows = list(table.rows)
    if n is not None:
        rows = [r for r in rows if r.n == n]
    if level is not None:
        rows = [r for r in rows if (r.alpha, r.beta) == (level.shape, level.scale)]
    cells = {(r.n, r.alpha, r.beta) for r in rows}
    if not rows:
        raise ValueError("no rows for the requested cell")
    if len(cells) > 1:
        raise ValueError(f"cell is ambiguous ({len(cells)} cells match); pass n and level")
    field_name = _TARGET_FIELDS[target]
    pairs = sorted(
        ((r.method, getattr(r, field_name)) for r in rows),
        key=lambda mv: (abs(mv[1]), mv[0]),
    )
    return pairs


def _plot_rows(table: MetricTable, metric: str, param: str) -> list[tuple[str, int, float]]:
    field_name = f"{metric.lower()}_{param}"
    keyed = sorted(table.rows, key=lambda r: (r.method, r.n))
    return [(r.method, r.n, getattr(r, field_name)) for r in keyed]


def emit_plot_data(table: MetricTable, path) -> list[Path]:
    """Write plot-ready CSVs (method,n,value), one per (metric, parameter).

    ``path`` is a base prefix; files are named <base>_<metric>_<param>.csv.
    Values are written with full precision so parsing recovers the table
    entries exactly. Returns the written paths.
    """
    base = Path(path)
    base.parent.mkdir(parents=True, exist_ok=True)
    metrics = ("BIAS", "RMSE") if table.metric == "BOTH" else (table.metric,)
    written = []
    for metric in metrics:
        for param in ("alpha", "beta"):
            target = base.with_name(f"{base.name}_{metric.lower()}_{param}.csv")
            lines = ["method,n,value"]
            for method, n, value in _plot_rows(table, metric, param):
                lines.append(f"{method},{n},{value!r}")
            try:
                target.write_text("\n".join(lines) + "\n")
            except OSError as exc:
                raise OSError(f"cannot write plot data to {target}: {exc}") from exc
            written.append(target)
    return written


def _g6(x: float) -> str:
    return f"{x:.6g}"


def write_metric_csv(table: MetricTable, path) -> Path:
    """Write the full metric table (fixed header, 6 significant digits)."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    lines = [CSV_HEADER]
    for r in table.rows:
        lines.append(",".join([
            r.method, str(r.n), _g6(r.alpha), _g6(r.beta),
            _g6(r.bias_alpha), _g6(r.bias_beta), _g6(r.rmse_alpha), _g6(r.rmse_beta),
            str(r.reps), str(r.failures),
        ]))
    try:
        target.write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write metric table to {target}: {exc}") from exc
    return target
