"""Static SVG overlays of the sensitivity floor and its competitors."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = ["sensitivity_overlay"]

_CURVE_STYLES = {
    "rel_sens_bound": dict(color="black", lw=2.0, label="quantum floor"),
    "photon_counting": dict(color="tab:green", lw=1.2, ls="--", label="photon counting"),
    "radiometer": dict(color="tab:blue", lw=1.2, ls="-.", label="radiometer"),
    "claimed_fast_sampling": dict(color="tab:red", lw=1.2, ls=":", label="claimed fast sampling"),
}

_POINT_STYLES = {
    "photon_counting": dict(marker="o", color="tab:green"),
    "heterodyne_radiometer": dict(marker="s", color="tab:blue"),
    "two_detector_correlation": dict(marker="^", color="tab:purple"),
}


def sensitivity_overlay(grid_rows, sim_points, path, title="Relative sensitivity vs occupation"):
    """Log-log overlay of closed-form curves and simulated estimator points.

    ``grid_rows`` are dicts carrying at least ``n0`` and
    ``rel_sens_bound`` (other known curve keys are drawn when present);
    ``sim_points`` are dicts with ``kind``, ``n0``, ``rel_sensitivity``,
    and ``bootstrap_sigma``.  Output is a self-contained SVG: text is
    stored as paths and no creation date is embedded, so identical inputs
    give identical files.
    """
    plt.rcParams["svg.fonttype"] = "path"
    plt.rcParams["svg.hashsalt"] = "qcrb-overlay"

    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    xs = [row["n0"] for row in grid_rows]
    for key, style in _CURVE_STYLES.items():
        if grid_rows and key in grid_rows[0]:
            ax.plot(xs, [row[key] for row in grid_rows], **style)
    for point in sim_points:
        style = _POINT_STYLES.get(point["kind"], dict(marker="x", color="gray"))
        ax.errorbar(
            point["n0"],
            point["rel_sensitivity"],
            yerr=3.0 * point["bootstrap_sigma"],
            capsize=3,
            ls="none",
            label=f"simulated {point['kind'].replace('_', ' ')}",
            **style,
        )
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("occupation $n_0$")
    ax.set_ylabel("relative sensitivity")
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.25)
    # single legend entry per label
    handles, labels = ax.get_legend_handles_labels()
    unique = dict(zip(labels, handles))
    ax.legend(unique.values(), unique.keys(), fontsize=8)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path
