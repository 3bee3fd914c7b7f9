"""Figures for bench results, rendered straight to image files."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .bench import AVERAGE_SEED, BenchRow
from .image import Image


def _save(fig: Figure, path) -> Path:
    path = Path(path)
    FigureCanvasAgg(fig)
    fig.savefig(path, dpi=120)
    return path


def plot_curves(rows: list[BenchRow], path) -> Path:
    """Relative improvement against noise percentage: solid for the
    proposed filter, dashed for the median."""
    avg = sorted((r for r in rows if r.seed == AVERAGE_SEED), key=lambda r: r.p_percent)
    p = [r.p_percent for r in avg]
    fig = Figure(figsize=(6, 4))
    ax = fig.add_subplot()
    ax.plot(p, [r.delta_proposed for r in avg], "k-", marker="o", label="modularity filter")
    ax.plot(p, [r.delta_median for r in avg], "k--", marker="s", label="median 3x3")
    ax.set_xlabel("damaged pixels, %")
    ax.set_ylabel("relative improvement, %")
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    return _save(fig, path)


def _show(ax, image: Image, title: str):
    if image.channels == 1:
        ax.imshow(image.pixels[:, :, 0], cmap="gray", vmin=0, vmax=255, interpolation="nearest")
    else:
        ax.imshow(np.asarray(image.pixels), interpolation="nearest")
    ax.set_title(title)
    ax.set_axis_off()


def plot_panels(orig: Image, noisy: Image, proposed: Image, median: Image, path,
                caption: str = "") -> Path:
    """Side-by-side original, noisy and both restorations."""
    fig = Figure(figsize=(12, 3.4))
    panels = (("original", orig), ("noisy", noisy), ("modularity filter", proposed), ("median 3x3", median))
    for i, (title, img) in enumerate(panels):
        _show(fig.add_subplot(1, 4, i + 1), img, title)
    if caption:
        fig.suptitle(caption)
    fig.tight_layout()
    return _save(fig, path)
