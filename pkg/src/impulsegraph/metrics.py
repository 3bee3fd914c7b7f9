"""Image distances, relative improvement and detector scores."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UndefinedImprovementError
from .image import DamageMask, Image


@dataclass(frozen=True)
class EvalReport:
    d_orig_noisy: float
    d_orig_restored: float
    delta_improvement_percent: float
    precision: float | None = None
    recall: float | None = None


def _check_same_shape(a: Image, c: Image):
    if (a.width, a.height, a.channels) != (c.width, c.height, c.channels):
        raise ValueError(
            f"image shapes differ: {a.width}x{a.height}x{a.channels} "
            f"vs {c.width}x{c.height}x{c.channels}"
        )


def image_distance(a: Image, c: Image) -> float:
    """Largest per-channel mean absolute difference."""
    _check_same_shape(a, c)
    diff = np.abs(a.pixels.astype(np.int64) - c.pixels.astype(np.int64))
    per_channel = diff.reshape(-1, a.channels).mean(axis=0)
    return float(per_channel.max())


def relative_improvement(orig: Image, noisy: Image, restored: Image) -> float:
    """Percent of the noisy-to-original distance removed by restoration."""
    d_noisy = image_distance(orig, noisy)
    if d_noisy == 0:
        raise UndefinedImprovementError("noisy image equals the original")
    d_restored = image_distance(orig, restored)
    return (d_noisy - d_restored) / d_noisy * 100.0


def mask_scores(truth: DamageMask, detected: DamageMask) -> tuple[float, float]:
    if (truth.width, truth.height) != (detected.width, detected.height):
        raise ValueError("mask dimensions differ")
    tp = int(np.sum(truth.flags & detected.flags))
    fp = int(np.sum(~truth.flags & detected.flags))
    fn = int(np.sum(truth.flags & ~detected.flags))
    precision = tp / (tp + fp) if tp + fp else 1.0
    recall = tp / (tp + fn) if tp + fn else 1.0
    return precision, recall


def evaluate(orig: Image, noisy: Image, restored: Image,
             truth: DamageMask | None = None, detected: DamageMask | None = None) -> EvalReport:
    d_noisy = image_distance(orig, noisy)
    d_restored = image_distance(orig, restored)
    precision = recall = None
    if truth is not None and detected is not None:
        precision, recall = mask_scores(truth, detected)
    return EvalReport(
        d_orig_noisy=d_noisy,
        d_orig_restored=d_restored,
        delta_improvement_percent=relative_improvement(orig, noisy, restored),
        precision=precision,
        recall=recall,
    )
