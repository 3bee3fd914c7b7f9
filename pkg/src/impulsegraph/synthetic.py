"""Deterministic synthetic test images."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .image import Image

KINDS = ("solid_rect", "solid_plus_gradient")


@dataclass(frozen=True)
class SyntheticSpec:
    """Fill parameters; colours are gray levels or RGB triples.

    ``solid_rect`` uses ``background`` (default 200) and ``foreground``
    (the centred rectangle, half the image in each dimension). For
    ``solid_plus_gradient`` the left half is ``background`` (default 40) and
    the right half ramps from ``gradient_start`` (default: the background,
    so the halves meet without a step) to ``gradient_end``.
    """

    kind: str = "solid_rect"
    width: int = 128
    height: int = 128
    background: int | tuple | None = None
    foreground: int | tuple = 50
    gradient_start: int | tuple | None = None
    gradient_end: int | tuple = 220

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.width < 1 or self.height < 1:
            raise ValueError("synthetic image dimensions must be positive")

    @property
    def fill(self):
        if self.background is not None:
            return self.background
        return 200 if self.kind == "solid_rect" else 40

    @property
    def ramp_start(self):
        return self.fill if self.gradient_start is None else self.gradient_start

    @property
    def channels(self) -> int:
        fills = (self.fill, self.foreground, self.ramp_start, self.gradient_end)
        return 3 if any(np.ndim(f) for f in fills) else 1


def _color(value, channels):
    return np.broadcast_to(np.asarray(value, dtype=np.float64), (channels,))


def generate_synthetic(spec: SyntheticSpec) -> Image:
    w, h, c = spec.width, spec.height, spec.channels
    arr = np.empty((h, w, c), dtype=np.float64)
    arr[...] = _color(spec.fill, c)
    if spec.kind == "solid_rect":
        rw, rh = w // 2, h // 2
        x0, y0 = (w - rw) // 2, (h - rh) // 2
        arr[y0 : y0 + rh, x0 : x0 + rw] = _color(spec.foreground, c)
    else:
        start = (w + 1) // 2
        span = w - start
        if span > 0:
            t = np.arange(span) / max(span - 1, 1)
            lo, hi = _color(spec.ramp_start, c), _color(spec.gradient_end, c)
            arr[:, start:] = lo + t[:, None] * (hi - lo)
    return Image.from_array(np.rint(arr).astype(np.uint8))
