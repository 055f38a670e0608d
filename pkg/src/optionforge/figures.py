"""Matplotlib renderings written next to the CLI's delimited outputs.

Only 2-D line reports: convergence error decay, simulated path fans, and
per-volatility price profiles read off the final grid level.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .gbm import PathSet
from .pde import ConvergenceLevel, PriceGrid

MAX_PATHS_DRAWN = 50


def convergence_figure(rows: Sequence[ConvergenceLevel], path: Path, theta: float) -> None:
    """log-log error vs mesh width with first/second-order reference slopes."""
    hs = [r.h for r in rows]
    errors = [max(r.error, 1e-16) for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.loglog(hs, errors, "o-", label=f"measured (theta={theta:g})")
    anchor = errors[0]
    for order, style in ((1, ":"), (2, "--")):
        ax.loglog(hs, [anchor * (h / hs[0]) ** order for h in hs], style,
                  color="gray", label=f"O(h^{order}) reference")
    ax.set_xlabel("mesh width h")
    ax.set_ylabel("|price error| at spot")
    ax.set_title("Grid convergence")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def paths_figure(paths: PathSet, path: Path) -> None:
    """Fan chart of the first simulated realizations."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    times = paths.times
    for row in paths.paths[:MAX_PATHS_DRAWN]:
        ax.plot(times, row, lw=0.8, alpha=0.7)
    ax.set_xlabel("time (years)")
    ax.set_ylabel("asset price")
    drawn = min(len(paths.paths), MAX_PATHS_DRAWN)
    ax.set_title(f"Simulated paths ({drawn} of {len(paths.paths)} shown)")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def surface_profiles_figure(
    surfaces: Sequence[tuple[float, PriceGrid]], path: Path
) -> None:
    """Final-level option value vs asset price, one line per volatility."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for sigma, grid in sorted(surfaces, key=lambda item: item[0]):
        ax.plot(grid.s_nodes, grid.values[:, -1], lw=1.2, label=f"sigma={sigma:.3f}")
    ax.set_xlabel("asset price")
    ax.set_ylabel("option value at full time-to-expiry")
    ax.set_title("Volatility sweep: price profiles")
    ax.grid(True, alpha=0.3)
    if len(surfaces) <= 12:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
