"""Figure rendering for run reports.

Renders the step series and wait-time CDFs to PNG files next to the
delimited output. Uses the Agg backend and pinned PNG metadata so the same
run produces byte-identical images.
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .metrics import StepSeries

_SAVE_KWARGS = {"dpi": 120, "metadata": {"Software": "schedsim"}}

plt.rcParams.update(
    {
        "figure.figsize": (7.0, 4.0),
        "axes.grid": True,
        "grid.alpha": 0.35,
        "savefig.bbox": "tight",
    }
)


def _save(fig, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, **_SAVE_KWARGS)
    plt.close(fig)
    return path


def _step(ax, series: StepSeries, **kwargs):
    if not series.points:
        return
    times = [t for t, _ in series.points]
    values = [v for _, v in series.points]
    ax.step(times, values, where="post", **kwargs)


def plot_occupied(series: StepSeries, total_cores: int, path) -> Path:
    """Cores in use over simulation time, with the machine size as a ceiling."""
    fig, ax = plt.subplots()
    _step(ax, series, color="tab:blue")
    ax.axhline(total_cores, color="tab:red", linestyle="--", linewidth=1, label=f"machine size ({total_cores})")
    ax.set_xlabel("simulation time [s]")
    ax.set_ylabel("occupied cores")
    ax.set_title("Occupied cores over time")
    ax.legend(loc="best")
    return _save(fig, path)


def plot_running(series: StepSeries, path) -> Path:
    """Number of running jobs over simulation time."""
    fig, ax = plt.subplots()
    _step(ax, series, color="tab:green")
    ax.set_xlabel("simulation time [s]")
    ax.set_ylabel("running jobs")
    ax.set_title("Running jobs over time")
    return _save(fig, path)


def plot_wait_cdf(curves: Mapping[str, Sequence[tuple[int, float]]], path) -> Path:
    """Empirical wait-time CDFs, one labelled curve per scenario/policy."""
    fig, ax = plt.subplots()
    for label, points in curves.items():
        if not points:
            continue
        waits = [w for w, _ in points]
        fractions = [f for _, f in points]
        ax.step(waits, fractions, where="post", label=label)
    ax.set_xlabel("wait time [s]")
    ax.set_ylabel("fraction of jobs")
    ax.set_ylim(0.0, 1.05)
    ax.set_title("Wait time CDF")
    if curves:
        ax.legend(loc="best")
    return _save(fig, path)


def plot_mean_waits(mean_waits: Mapping[str, float], path, title: Optional[str] = None) -> Path:
    """Mean wait per scheduling policy as a bar chart."""
    fig, ax = plt.subplots()
    labels = list(mean_waits)
    values = [mean_waits[label] for label in labels]
    ax.bar(labels, values, color="tab:purple")
    ax.set_ylabel("mean wait [s]")
    ax.set_title(title or "Mean wait by policy")
    return _save(fig, path)
