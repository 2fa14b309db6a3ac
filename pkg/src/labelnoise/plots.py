"""SVG figures for the experiment grid: p-value box-plot panels and
analytic power curves.  Optional output; nothing downstream parses these.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

import matplotlib
matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "labelnoise"
import matplotlib.pyplot as plt

from .anchors import power_curve

CLEAN_COLOR = "#2ca02c"
NOISY_COLOR = "#9467bd"


def _box_stat(quartiles, whiskers):
    q1, q2, q3 = quartiles
    lo, hi = whiskers
    return {"med": q2, "q1": q1, "q3": q3, "whislo": lo, "whishi": hi,
            "fliers": []}


def plot_grid_boxes(config, summaries, outdir) -> list[Path]:
    """One panel figure per noise pair: rows = N, columns = delta,
    x-axis = k, green boxes for clean-fit p-values, purple for noisy."""
    outdir = Path(outdir)
    by_coords = {
        (s.cell.n, s.cell.alpha, s.cell.beta, s.cell.k, s.cell.delta): s
        for s in summaries
    }
    paths = []
    for alpha, beta in config.noise_gaps:
        n_rows = len(config.n_grid)
        n_cols = len(config.delta_grid)
        fig, axes = plt.subplots(
            n_rows, n_cols, figsize=(3.2 * n_cols, 2.4 * n_rows),
            squeeze=False, sharey=True,
        )
        for i, n in enumerate(config.n_grid):
            for j, delta in enumerate(config.delta_grid):
                ax = axes[i][j]
                clean_stats, noisy_stats, positions = [], [], []
                for m, k in enumerate(config.k_grid):
                    s = by_coords[(n, alpha, beta, k, delta)]
                    clean_stats.append(_box_stat(s.clean_quartiles, s.clean_whiskers))
                    noisy_stats.append(_box_stat(s.noisy_quartiles, s.noisy_whiskers))
                    positions.append(m)
                for stats, offset, color in (
                    (clean_stats, -0.18, CLEAN_COLOR),
                    (noisy_stats, +0.18, NOISY_COLOR),
                ):
                    arts = ax.bxp(
                        stats, positions=[p + offset for p in positions],
                        widths=0.3, showfliers=False, patch_artist=True,
                    )
                    for box in arts["boxes"]:
                        box.set(facecolor=color, alpha=0.6)
                for level, color in ((0.10, "red"), (0.05, "blue")):
                    ax.axhline(level, color=color, linestyle="--", linewidth=0.8)
                ax.set_xticks(positions)
                ax.set_xticklabels([str(k) for k in config.k_grid])
                ax.set_ylim(-0.05, 1.05)
                if i == 0:
                    ax.set_title(f"delta = {delta:g}")
                if i == n_rows - 1:
                    ax.set_xlabel("anchor count k")
                if j == 0:
                    ax.set_ylabel(f"N = {n}\np-value")
        fig.suptitle(
            f"p-values, alpha = {alpha:g}, beta = {beta:g} "
            f"(green: clean fit, purple: corrupted fit)"
        )
        fig.tight_layout()
        path = outdir / f"boxes_alpha{alpha:g}_beta{beta:g}.svg"
        fig.savefig(path, metadata={"Date": None})
        plt.close(fig)
        paths.append(path)
    return paths


def plot_power_curves(path, gaps=None, k_values=(1, 2, 4, 8, 16, 32),
                      v: float = 0.1, v_tilde: float = 0.1,
                      significance: float = 0.05) -> Path:
    """Analytic power as a function of the rate gap, one curve per k."""
    if gaps is None:
        gaps = np.linspace(0.0, 0.9, 181)
    gaps = np.asarray(gaps, dtype=float)
    table = power_curve(gaps, k_values, v, v_tilde, significance)
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    for j, k in enumerate(k_values):
        ax.plot(gaps, table[:, j], label=f"k = {k}")
    ax.set_xlabel("beta - alpha")
    ax.set_ylabel("power")
    ax.set_ylim(0.0, 1.05)
    ax.legend(fontsize=8)
    ax.set_title(f"analytic power, v = {v:g}, level = {significance:g}")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, metadata={"Date": None})
    plt.close(fig)
    return path
