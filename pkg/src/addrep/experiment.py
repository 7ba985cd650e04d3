"""Multi-seed experiment runner with deterministic aggregation.

A config describes a construction (block sampler or independent-inclusion
sampler), a horizon, trial count, base seed, checkpoints, and normalized
error thresholds.  Trial i uses seed base_seed + i and runs

    construct -> profile (fft engine) -> error series -> violation scan.

The trial results are reduced in trial-index order, so the emitted bytes do
not depend on how many workers executed the trials.

Outputs, written under ``out_dir`` with the configured ``prefix``:

  * ``<prefix>_trials.csv``  -- long format, header ``trial,checkpoint,metric,value``.
    Per checkpoint: metrics ``E`` and ``norm_cum``; per trial (empty
    checkpoint field): ``seed``, ``max_norm_pt``, and one
    ``violations@<threshold>`` row per threshold.
  * ``<prefix>_summary.json`` -- config echo plus aggregate statistics:
    per-checkpoint min / median / p95 / max of |norm_cum| (nearest-rank
    percentiles, no interpolation) and per-threshold violation aggregates.
  * ``<prefix>_norm_cum.png`` and ``<prefix>_pointwise.png`` -- rendered
    alongside the CSV unless figures are disabled.

Block-sampler experiments compare against the constant weight family with
c = p^2/q^2 (the construction's mean density), whose cumulative target is
c(N+1)(N+2)/2.  ``quad_coeff`` overrides the N^2 coefficient of that
cumulative target (default c/2), which is how sensitivity controls inject a
deliberately wrong quadratic term.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .bounds import error_series, violation_scan
from .construct import BlockSamplerParams, sample_bernoulli_set, sample_block_set
from .exceptions import CapacityError, ParameterError
from .repfn import cumulative_rep, repfn_fast
from .weights import WeightSequence, constant, parse_weights

KIND_ALIASES = {"block": "block", "thm3": "block", "bernoulli": "bernoulli", "thm6": "bernoulli"}


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str                      # "block" (alias "thm3") or "bernoulli" (alias "thm6")
    n_max: int
    trials: int
    base_seed: int = 0
    checkpoints: tuple[int, ...] = ()
    thresholds: tuple[float, ...] = (5.0, 8.0)
    p: int | None = None           # block kind
    q: int | None = None           # block kind
    weights: str | None = None     # weight spec; required for bernoulli
    n_start: int = 2               # first index scored by pointwise scans
    quad_coeff: float | None = None  # override of the cumulative target's N^2 coefficient
    workers: int = 1
    out_dir: str = "."
    prefix: str = "experiment"
    figures: bool = True
    mem_budget_gib: float = 4.0

    def __post_init__(self) -> None:
        kind = KIND_ALIASES.get(self.kind)
        if kind is None:
            raise ParameterError(f"unknown experiment kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        if self.trials < 1:
            raise ParameterError("trials must be >= 1")
        if self.n_max < 2:
            raise ParameterError("n_max must be >= 2")
        cps = tuple(int(c) for c in self.checkpoints)
        if list(cps) != sorted(cps) or (cps and (cps[0] < 2 or cps[-1] > self.n_max)):
            raise ParameterError("checkpoints must be sorted and lie in [2, n_max]")
        object.__setattr__(self, "checkpoints", cps)
        object.__setattr__(self, "thresholds", tuple(float(t) for t in self.thresholds))
        if self.n_start < 2:
            raise ParameterError("n_start must be >= 2")
        if self.workers < 1:
            raise ParameterError("workers must be >= 1")
        if kind == "block":
            if self.p is None or self.q is None:
                raise ParameterError("block experiments need p and q")
            BlockSamplerParams(self.p, self.q, 1, 0)  # parameter validation
        else:
            if self.weights is None:
                raise ParameterError("bernoulli experiments need a weight spec")
            parse_weights(self.weights)

    def weight_sequence(self) -> WeightSequence:
        if self.weights is not None:
            return parse_weights(self.weights)
        return constant(self.p**2 / self.q**2)

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            raw = json.load(fh)
        return cls.from_dict(raw)

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(raw) - known
        if unknown:
            raise ParameterError(f"unknown config fields {sorted(unknown)}")
        raw = dict(raw)
        for key in ("checkpoints", "thresholds"):
            if key in raw and raw[key] is not None:
                raw[key] = tuple(raw[key])
        return cls(**raw)


@dataclass(frozen=True)
class TrialResult:
    trial: int
    seed: int
    checkpoint_E: tuple[float, ...]
    checkpoint_norm_cum: tuple[float, ...]
    max_norm_pt: float
    violations: tuple[int, ...]  # one count per configured threshold


def estimate_trial_bytes(n_max: int) -> int:
    """Peak resident bytes of one trial (profile, series, transform scratch)."""
    fft_len = 1 << max(1, (2 * (n_max + 1) - 1)).bit_length()
    profile = 2 * 8 * (n_max + 1)          # R and S, uint64
    series = 4 * 8 * (n_max + 1)           # e, E, norm_pt, norm_cum
    scratch = 3 * 8 * fft_len              # transform input, spectrum, output
    bits = (n_max + 8) // 8
    return profile + series + scratch + bits


def _quad_adjustment(cfg: ExperimentConfig, w: WeightSequence) -> float:
    """Extra N^2 coefficient added to the cumulative target (0 when not overridden)."""
    if cfg.quad_coeff is None:
        return 0.0
    if w.kind == "constant":
        base = w.c / 2.0
    else:
        base = 0.0
    return cfg.quad_coeff - base


def run_trial(cfg: ExperimentConfig, trial: int) -> TrialResult:
    seed = cfg.base_seed + trial
    w = cfg.weight_sequence()
    if cfg.kind == "block":
        n_blocks = -(-(cfg.n_max + 1) // cfg.q)
        A = sample_block_set(BlockSamplerParams(cfg.p, cfg.q, n_blocks, seed))
        if A.n_max > cfg.n_max:
            A = A.truncate(cfg.n_max)
    else:
        A = sample_bernoulli_set(w, cfg.n_max, seed)
    series = error_series(repfn_fast(A, "fft"), w)

    delta = _quad_adjustment(cfg, w)
    cps = np.asarray(cfg.checkpoints, dtype=np.int64)
    if cps.size:
        e_at = series.E[cps] - delta * cps.astype(np.float64) ** 2
        with np.errstate(invalid="ignore"):
            m_at = e_at / np.sqrt(cps * np.log(cps))
    else:
        e_at = np.empty(0)
        m_at = np.empty(0)

    window = series.norm_pt[cfg.n_start :]
    finite = window[np.isfinite(window)]
    max_norm_pt = float(np.max(np.abs(finite))) if finite.size else math.nan
    counts = tuple(
        violation_scan(series, thr, "pointwise", cfg.n_start).count
        for thr in cfg.thresholds
    )
    return TrialResult(
        trial=trial,
        seed=seed,
        checkpoint_E=tuple(float(x) for x in e_at),
        checkpoint_norm_cum=tuple(float(x) for x in m_at),
        max_norm_pt=max_norm_pt,
        violations=counts,
    )


def nearest_rank(sorted_values: np.ndarray, pct: float) -> float:
    """Nearest-rank percentile (no interpolation) of an ascending array."""
    n = len(sorted_values)
    if n == 0:
        return math.nan
    rank = max(1, math.ceil(pct / 100.0 * n))
    return float(sorted_values[rank - 1])


def aggregate(cfg: ExperimentConfig, results: list[TrialResult]) -> dict:
    out: dict = {"trials": len(results), "checkpoints": {}, "thresholds": {}}
    for ci, cp in enumerate(cfg.checkpoints):
        vals = np.sort(np.abs([r.checkpoint_norm_cum[ci] for r in results]))
        out["checkpoints"][str(cp)] = {
            "abs_norm_cum_min": float(vals[0]),
            "abs_norm_cum_median": nearest_rank(vals, 50.0),
            "abs_norm_cum_p95": nearest_rank(vals, 95.0),
            "abs_norm_cum_max": float(vals[-1]),
        }
    for ti, thr in enumerate(cfg.thresholds):
        counts = [r.violations[ti] for r in results]
        out["thresholds"][f"{thr:g}"] = {
            "total_violations": int(sum(counts)),
            "trials_with_zero": int(sum(1 for c in counts if c == 0)),
            "max_per_trial": int(max(counts)),
        }
    finite = sorted(r.max_norm_pt for r in results if math.isfinite(r.max_norm_pt))
    if finite:
        arr = np.asarray(finite)
        out["max_norm_pt"] = {
            "min": float(arr[0]),
            "median": nearest_rank(arr, 50.0),
            "p95": nearest_rank(arr, 95.0),
            "max": float(arr[-1]),
        }
    return out


def _csv_value(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def write_trials_csv(cfg: ExperimentConfig, results: list[TrialResult], path) -> None:
    with open(path, "w") as fh:
        fh.write("trial,checkpoint,metric,value\n")
        for r in results:
            fh.write(f"{r.trial},,seed,{r.seed}\n")
            for cp, e, m in zip(cfg.checkpoints, r.checkpoint_E, r.checkpoint_norm_cum):
                fh.write(f"{r.trial},{cp},E,{_csv_value(e)}\n")
                fh.write(f"{r.trial},{cp},norm_cum,{_csv_value(m)}\n")
            fh.write(f"{r.trial},,max_norm_pt,{_csv_value(r.max_norm_pt)}\n")
            for thr, count in zip(cfg.thresholds, r.violations):
                fh.write(f"{r.trial},,violations@{thr:g},{count}\n")


@dataclass(frozen=True)
class ExperimentReport:
    config: ExperimentConfig
    results: list[TrialResult] = field(repr=False)
    aggregates: dict
    csv_path: Path
    json_path: Path
    figure_paths: tuple[Path, ...]


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    budget = int(cfg.mem_budget_gib * (1 << 30))
    need = estimate_trial_bytes(cfg.n_max) * cfg.workers
    if need > budget:
        raise CapacityError(
            f"configuration needs about {need / (1 << 30):.2f} GiB "
            f"({cfg.workers} worker(s) at n_max={cfg.n_max}); "
            f"budget is {cfg.mem_budget_gib:g} GiB"
        )

    indices = range(cfg.trials)
    if cfg.workers == 1:
        results = [run_trial(cfg, i) for i in indices]
    else:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(run_trial, [cfg] * cfg.trials, indices, chunksize=1))
    results.sort(key=lambda r: r.trial)

    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{cfg.prefix}_trials.csv"
    json_path = out_dir / f"{cfg.prefix}_summary.json"
    write_trials_csv(cfg, results, csv_path)

    aggregates = aggregate(cfg, results)
    summary = {"config": asdict(cfg), "aggregates": aggregates}
    with open(json_path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")

    figure_paths: tuple[Path, ...] = ()
    if cfg.figures:
        from . import figures  # deferred: pulls in matplotlib

        figure_paths = tuple(figures.experiment_figures(cfg, results, out_dir))
    return ExperimentReport(
        config=cfg,
        results=results,
        aggregates=aggregates,
        csv_path=csv_path,
        json_path=json_path,
        figure_paths=figure_paths,
    )
