"""Matplotlib figures written to files (Agg backend, no display)."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .raster import Bitmap, ComponentReport, trace_curves  # noqa: E402

__all__ = ["plot_bitmap", "plot_components", "plot_line_counts"]

CURVE_COLORS = ("tab:red", "tab:blue", "tab:green", "tab:purple", "tab:orange")


def _extent(spec):
    x_lo, x_hi, y_lo, y_hi = (float(v) for v in spec.window)
    return [x_lo, x_hi, y_lo, y_hi]


def plot_bitmap(bitmap: Bitmap, path, candidates: Sequence = (), title: str = "", labels: Sequence[str] = ()) -> Path:
    """I(p) in gray with optional candidate curves on top."""
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.imshow(np.where(bitmap.data, 0.55, 1.0), cmap="gray", vmin=0, vmax=1,
              extent=_extent(bitmap.spec), interpolation="nearest")
    for k, h in enumerate(candidates):
        color = CURVE_COLORS[k % len(CURVE_COLORS)]
        for n, curve in enumerate(trace_curves(h, bitmap.spec)):
            xs, ys = zip(*curve)
            lab = labels[k] if (labels and n == 0 and k < len(labels)) else None
            ax.plot(xs, ys, color=color, lw=0.8, label=lab)
    if labels:
        ax.legend(loc="upper right", fontsize=7)
    ax.set_xlabel("$y_1$")
    ax.set_ylabel("$y_2$")
    ax.set_title(title + (" (advisory)" if bitmap.advisory else ""), fontsize=9)
    ax.set_aspect("equal")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_components(bitmap: Bitmap, report: ComponentReport, path, title: str = "") -> Path:
    """Complement components colored by label; bounded ones outlined."""
    fig, ax = plt.subplots(figsize=(5, 5))
    labels = np.ma.masked_where(report.labels == 0, (report.labels - 1) % 10)
    ax.imshow(np.where(bitmap.data, 0.8, 1.0), cmap="gray", vmin=0, vmax=1,
              extent=_extent(bitmap.spec), interpolation="nearest")
    ax.imshow(labels, cmap="tab10", vmin=0, vmax=9, extent=_extent(bitmap.spec), interpolation="nearest", alpha=0.85)
    for comp in report.components:
        x, y = (float(v) for v in comp.representative)
        ax.plot(x, y, "k+" if comp.bounded else "kx", ms=5)
    ax.set_title(title or f"{len(report.bounded)} bounded / {report.count} components", fontsize=9)
    ax.set_xlabel("$y_1$")
    ax.set_ylabel("$y_2$")
    ax.set_aspect("equal")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_line_counts(counts: Sequence[int], degree: int, path, title: str = "") -> Path:
    """Histogram of real intersection counts from the line test."""
    fig, ax = plt.subplots(figsize=(4.5, 3))
    bins = np.arange(-0.5, degree + 1.5, 1.0)
    ax.hist(list(counts), bins=bins, color="tab:blue", edgecolor="black")
    ax.axvline(degree, color="tab:red", ls="--", lw=1, label=f"degree {degree}")
    ax.set_xlabel("distinct real intersections")
    ax.set_ylabel("lines")
    ax.legend(fontsize=8)
    ax.set_title(title, fontsize=9)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
