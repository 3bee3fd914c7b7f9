"""3x3 per-channel median filter, the comparison baseline."""

from __future__ import annotations

import numpy as np

from .image import Image


def window_median(values) -> int:
    values = sorted(values)
    if not values:
        raise ValueError("median of an empty window")
    if len(values) % 2 == 0:
        raise ValueError(f"window must have odd length, got {len(values)}")
    return values[len(values) // 2]


def median_filter(image: Image) -> Image:
    """Median of each channel over the 3x3 window, edges replicated."""
    H, W = image.height, image.width
    padded = np.pad(image.pixels, ((1, 1), (1, 1), (0, 0)), mode="edge")
    stack = np.stack(
        [padded[1 + dy : 1 + dy + H, 1 + dx : 1 + dx + W] for dy in (-1, 0, 1) for dx in (-1, 0, 1)]
    )
    # partition is enough to place the 5th smallest of 9 at index 4
    return image.replace(np.partition(stack, 4, axis=0)[4])
