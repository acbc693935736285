"""Figures for benchmark reports."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def plot_report(rows: list[dict], path: Path | str, title: str = "") -> Path:
    """Scatter of added gates against input gate count, both on log scales.

    Circuits that needed no extra gates are drawn on the bottom axis.
    """
    path = Path(path)
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    g_in = [r["g_in"] for r in rows]
    added = [r["added"] for r in rows]
    floor = 0.5
    ax1.scatter(g_in, [max(a, floor) for a in added], s=18)
    ax1.set_xscale("log")
    ax1.set_yscale("log")
    ax1.set_ylim(bottom=floor * 0.8)
    ax1.set_xlabel("input gates")
    ax1.set_ylabel("added gates (0 drawn at 0.5)")
    ax1.grid(True, which="both", alpha=0.3)

    d_in = [r["depth_in"] for r in rows]
    d_out = [r["depth_out"] for r in rows]
    ax2.scatter(d_in, d_out, s=18, color="tab:orange")
    hi = max(d_in + d_out + [1])
    ax2.plot([1, hi], [1, hi], color="grey", lw=0.8, ls="--")
    ax2.set_xscale("log")
    ax2.set_yscale("log")
    ax2.set_xlabel("input depth")
    ax2.set_ylabel("output depth")
    ax2.grid(True, which="both", alpha=0.3)

    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
