"""Reproducible impulse-noise injection driven by a 32-bit LCG."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .image import DamageMask, Image

LCG_A = 1664525
LCG_C = 1013904223
LCG_M = 2**32
MODES = ("random_value", "salt_pepper")


@dataclass(frozen=True)
class NoiseSpec:
    p: float = 0.1
    mode: str = "random_value"
    seed: int = 1
    lcg_a: int = LCG_A
    lcg_c: int = LCG_C

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"noise fraction must be in [0, 1], got {self.p}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        for name in ("seed", "lcg_a", "lcg_c"):
            v = getattr(self, name)
            if not 0 <= v < LCG_M:
                raise ValueError(f"{name} must be a 32-bit unsigned integer, got {v}")


def lcg_next(state: int, a: int = LCG_A, c: int = LCG_C) -> int:
    return (a * state + c) % LCG_M


class Lcg:
    """Stateful wrapper yielding successive LCG outputs."""

    def __init__(self, seed: int, a: int = LCG_A, c: int = LCG_C):
        self.state = seed % LCG_M
        self.a = a
        self.c = c

    def next(self) -> int:
        self.state = lcg_next(self.state, self.a, self.c)
        return self.state

    @classmethod
    def from_spec(cls, spec: NoiseSpec) -> "Lcg":
        return cls(spec.seed, spec.lcg_a, spec.lcg_c)


def scale(draw: int, n: int) -> int:
    """Map a 32-bit draw onto ``range(n)`` using its high bits.

    The low bits of a power-of-two-modulus LCG have very short periods
    (bit k repeats every 2**(k+1) draws), so ``draw % n`` would revisit a
    handful of coordinates forever when ``n`` is a power of two.
    """
    return (draw * n) >> 32


def damage_count(p: float, width: int, height: int) -> int:
    return math.floor(p * width * height)


def _sample(rng: Lcg, p: float, width: int, height: int) -> np.ndarray:
    flags = np.zeros((height, width), dtype=bool)
    quota = damage_count(p, width, height)
    if quota >= width * height:
        flags[:] = True
        return flags
    placed = 0
    while placed < quota:
        x = scale(rng.next(), width)
        y = scale(rng.next(), height)
        if not flags[y, x]:
            flags[y, x] = True
            placed += 1
    return flags


def sample_damage(spec: NoiseSpec, width: int, height: int) -> DamageMask:
    """Pick exactly floor(p * width * height) distinct pixels."""
    return DamageMask(width, height, _sample(Lcg.from_spec(spec), spec.p, width, height))


def inject(image: Image, spec: NoiseSpec) -> tuple[Image, DamageMask]:
    """Corrupt a fraction of pixels; returns the noisy image and the true mask.

    Coordinates and colours come from one generator stream: first every
    coordinate draw, then the colour draws for flagged pixels in raster order.
    """
    rng = Lcg.from_spec(spec)
    flags = _sample(rng, spec.p, image.width, image.height)
    out = image.pixels.copy()
    for y, x in zip(*np.nonzero(flags)):
        if spec.mode == "salt_pepper":
            out[y, x] = 255 if rng.next() >> 31 else 0
        else:
            for ch in range(image.channels):
                out[y, x, ch] = rng.next() >> 24
    return image.replace(out), DamageMask(image.width, image.height, flags)
