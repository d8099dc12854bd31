"""Static SVG figures rendered from projected series.

Purely a convenience on top of the CSV output; nothing downstream depends on
the rendered pixels. The Date metadata is stripped so repeated runs produce
identical files.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "minecast"  # deterministic element ids

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .projection import ProjectionSeries  # noqa: E402
from .sensitivity import SweepPoint  # noqa: E402

ELECTRICITY_COLOR = "#1f77b4"
EMISSIONS_COLOR = "#d62728"
REWARD_COLOR = "#7f7f7f"


def _save(fig, path: Path):
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def plot_projection(series: ProjectionSeries, path: str | Path, title: str):
    """Annual electricity and emissions on twin axes."""
    years = [r.year for r in series.records]
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.plot(years, [r.electricity for r in series.records],
            color=ELECTRICITY_COLOR, label="electricity (TWh)")
    ax.set_xlabel("year")
    ax.set_ylabel("electricity (TWh)", color=ELECTRICITY_COLOR)
    ax2 = ax.twinx()
    ax2.plot(years, [r.emissions for r in series.records],
             color=EMISSIONS_COLOR, label="emissions (Mt)")
    ax2.set_ylabel("CO2 emissions (Mt)", color=EMISSIONS_COLOR)
    ax.set_title(title)
    fig.tight_layout()
    _save(fig, Path(path))


def plot_revenue_split(full: ProjectionSeries, reward_only: ProjectionSeries, path: str | Path):
    """Revenue streams and the electricity they drive, with and without fees."""
    years = [r.year for r in full.records]
    fig, (ax_rev, ax_ele) = plt.subplots(2, 1, figsize=(8, 6), sharex=True)

    ax_rev.plot(years, [r.block_reward_revenue + r.fee_revenue for r in full.records],
                color=EMISSIONS_COLOR, label="total revenue")
    ax_rev.plot(years, [r.block_reward_revenue for r in full.records],
                color=REWARD_COLOR, label="block rewards only")
    ax_rev.set_yscale("log")
    ax_rev.set_ylabel("revenue (USD/yr)")
    ax_rev.legend(loc="upper left", fontsize=8)

    ax_ele.plot(years, [r.electricity for r in full.records],
                color=ELECTRICITY_COLOR, label="electricity, total revenue")
    ax_ele.plot(years, [r.electricity for r in reward_only.records],
                color=REWARD_COLOR, label="electricity, rewards only")
    ax_ele.set_ylabel("electricity (TWh)")
    ax_ele.set_xlabel("year")
    ax_ele.legend(loc="upper left", fontsize=8)

    fig.tight_layout()
    _save(fig, Path(path))


def plot_sweeps(sweeps: dict[str, list[SweepPoint]], path: str | Path):
    """Small multiples: emission trajectories per swept parameter value."""
    axes_count = max(len(sweeps), 1)
    fig, axes = plt.subplots(1, axes_count, figsize=(4 * axes_count, 3.5), squeeze=False)
    for ax, (axis_name, points) in zip(axes[0], sorted(sweeps.items())):
        for p in points:
            if p.series is None:
                continue
            years = [r.year for r in p.series.records]
            ax.plot(years, [r.emissions for r in p.series.records],
                    label=f"{axis_name}={p.value:g}")
        ax.set_title(f"sweep over {axis_name}")
        ax.set_xlabel("year")
        ax.set_ylabel("emissions (Mt)")
        ax.legend(fontsize=7)
    fig.tight_layout()
    _save(fig, Path(path))
