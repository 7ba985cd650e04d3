"""Report figures rendered next to the delimited outputs.

Everything draws through the Agg backend and writes PNG files; nothing here
opens a window.  Figures are a reporting convenience: the CSV files remain
the by-the-byte deterministic record.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_RC = {
    "figure.figsize": (6.4, 4.0),
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "savefig.dpi": 150,
}


def experiment_figures(cfg, results, out_dir) -> list[Path]:
    """Normalized cumulative-error fan plus pointwise-extreme histogram."""
    out_dir = Path(out_dir)
    paths = []
    with plt.rc_context(_RC):
        if cfg.checkpoints:
            paths.append(_norm_cum_figure(cfg, results, out_dir / f"{cfg.prefix}_norm_cum.png"))
        paths.append(_pointwise_figure(cfg, results, out_dir / f"{cfg.prefix}_pointwise.png"))
    return paths


def _norm_cum_figure(cfg, results, path: Path) -> Path:
    cps = np.asarray(cfg.checkpoints, dtype=float)
    fig, ax = plt.subplots()
    curves = np.abs([r.checkpoint_norm_cum for r in results])
    for row in curves:
        ax.plot(cps, row, color="steelblue", alpha=0.25, lw=0.8)
    ax.plot(cps, np.median(curves, axis=0), color="crimson", marker="o", lw=1.6,
            label="median over trials")
    ax.set_xscale("log")
    ax.set_xlabel("checkpoint N")
    ax.set_ylabel(r"$|E_N| / (\sqrt{N\,\log N})$")
    ax.set_title(f"{cfg.kind} construction, {len(results)} trials, n_max={cfg.n_max}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def _pointwise_figure(cfg, results, path: Path) -> Path:
    vals = np.asarray([r.max_norm_pt for r in results], dtype=float)
    vals = vals[np.isfinite(vals)]
    fig, ax = plt.subplots()
    if vals.size:
        ax.hist(vals, bins=min(20, max(5, vals.size // 2)), color="steelblue", alpha=0.8)
    for thr in cfg.thresholds:
        ax.axvline(thr, color="crimson", ls="--", lw=1.2, label=f"threshold {thr:g}")
    ax.set_xlabel(r"max over n of $|R(n)-T(n)| / \sqrt{T(n)\,\log n}$")
    ax.set_ylabel("trials")
    ax.set_title(f"pointwise normalized extremes, n in [{cfg.n_start}, {cfg.n_max}]")
    if cfg.thresholds:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def error_series_figure(series, path) -> Path:
    """Two-panel view of one error series (pointwise and cumulative norms)."""
    path = Path(path)
    n = np.arange(series.n_max + 1)
    with plt.rc_context(_RC):
        fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True, figsize=(6.4, 5.2))
        ax1.plot(n, series.norm_pt, lw=0.5, color="steelblue")
        ax1.set_ylabel(r"$e_n / \sqrt{T(n)\,\log n}$")
        ax2.plot(n, series.norm_cum, lw=0.8, color="darkorange")
        ax2.set_ylabel(r"$E_N / (\sqrt{N\,\log N})$")
        ax2.set_xlabel("n")
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path
