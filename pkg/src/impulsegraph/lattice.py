"""The 8-connected weighted pixel lattice.

Neighbouring pixels are joined by an edge whose weight decays exponentially
with the Euclidean RGB distance between them, scaled by ``h``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GraphSizeError
from .image import Image
from .modularity import ModularityMatrix, normalize

DEFAULT_H = 20.0
DENSE_VERTEX_CAP = 4096
BORDERS = ("clip", "reflect")

# row-major offsets (dx, dy) of the 8 nearest neighbours
NEIGHBOR_OFFSETS = tuple(
    (dx, dy) for dy in (-1, 0, 1) for dx in (-1, 0, 1) if (dx, dy) != (0, 0)
)


@dataclass(frozen=True)
class GraphConfig:
    h: float = DEFAULT_H

    def __post_init__(self):
        if not (self.h > 0 and math.isfinite(self.h)):
            raise ValueError(f"h must be a positive finite number, got {self.h}")


@dataclass(frozen=True)
class WindowContext:
    """Vertices of a 3x3 window graph.

    ``members`` are window positions in row-major order. With ``clip``
    borders they are exactly the in-bounds pixels. With ``reflect`` borders a
    position outside the image is kept as a virtual vertex whose colour is
    read from ``sources[k]``, the mirror pixel across the border.
    """

    center: tuple[int, int]
    members: tuple[tuple[int, int], ...]
    center_index: int
    sources: tuple[tuple[int, int], ...]


def edge_weight(p, q, config: GraphConfig) -> float:
    # float() guards against uint8 wrap-around when given raw pixels
    dist = math.dist([float(v) for v in p[:3]], [float(v) for v in q[:3]])
    return math.exp(-dist / config.h)


def edge_weights(p: np.ndarray, q: np.ndarray, h: float) -> np.ndarray:
    """Vectorised :func:`edge_weight` over trailing RGB axes."""
    diff = np.asarray(p, dtype=np.float64) - np.asarray(q, dtype=np.float64)
    return np.exp(-np.sqrt(np.sum(diff * diff, axis=-1)) / h)


def _check_bounds(x, y, width, height):
    if not (0 <= x < width and 0 <= y < height):
        raise IndexError(f"pixel ({x}, {y}) outside {width}x{height} image")


def neighbors(x: int, y: int, width: int, height: int) -> list[tuple[int, int]]:
    _check_bounds(x, y, width, height)
    return [
        (x + dx, y + dy)
        for dx, dy in NEIGHBOR_OFFSETS
        if 0 <= x + dx < width and 0 <= y + dy < height
    ]


def reflect_supported(width: int, height: int) -> bool:
    return width >= 2 and height >= 2


def _mirror(v: int, size: int) -> int:
    if v < 0:
        return -v
    if v >= size:
        return 2 * (size - 1) - v
    return v


def window_context(width: int, height: int, center, border: str = "clip") -> WindowContext:
    if border not in BORDERS:
        raise ValueError(f"unknown border mode {border!r}")
    cx, cy = center
    _check_bounds(cx, cy, width, height)
    if border == "reflect" and not reflect_supported(width, height):
        border = "clip"
    members, sources = [], []
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            x, y = cx + dx, cy + dy
            inside = 0 <= x < width and 0 <= y < height
            if inside:
                sources.append((x, y))
            elif border == "reflect":
                sources.append((_mirror(x, width), _mirror(y, height)))
            else:
                continue
            members.append((x, y))
    return WindowContext(
        center=(cx, cy),
        members=tuple(members),
        center_index=members.index((cx, cy)),
        sources=tuple(sources),
    )


def _lattice_matrix(coords, colors: np.ndarray, h: float) -> np.ndarray:
    """Raw weight matrix over ``coords``: edges between Chebyshev-adjacent pairs."""
    pts = np.asarray(coords, dtype=np.int64)
    cheb = np.abs(pts[:, None, :] - pts[None, :, :]).max(axis=2)
    adjacent = cheb == 1
    W = edge_weights(colors[:, None, :], colors[None, :, :], h)
    return np.where(adjacent, W, 0.0)


def window_graph(
    image: Image, center, config: GraphConfig, border: str = "clip"
) -> tuple[ModularityMatrix, WindowContext]:
    """Normalised graph of the 3x3 window around ``center``.

    Raises DegenerateGraphError when the window has no edges (1x1 image).
    """
    ctx = window_context(image.width, image.height, center, border)
    rgb = image.rgb()
    colors = np.array([rgb[y, x] for x, y in ctx.sources], dtype=np.float64)
    E = _lattice_matrix(ctx.members, colors, config.h)
    return normalize(E, np.zeros(len(ctx.members))), ctx


def global_graph(
    image: Image, config: GraphConfig, cap: int = DENSE_VERTEX_CAP
) -> ModularityMatrix:
    """Dense whole-image graph, vertices in raster order (index ``y*width + x``)."""
    n = image.width * image.height
    if n > cap:
        raise GraphSizeError(f"{n} pixels exceed the dense graph cap of {cap}")
    w, hgt = image.width, image.height
    rgb = image.rgb().astype(np.float64)
    index = np.arange(n).reshape(hgt, w)
    E = np.zeros((n, n))
    # forward half of the neighbourhood; the mirror entries come from symmetry
    for dx, dy in ((1, 0), (-1, 1), (0, 1), (1, 1)):
        x0, x1 = max(0, -dx), w - max(0, dx)
        if x1 <= x0 or dy >= hgt:
            continue
        src = index[: hgt - dy, x0:x1]
        dst = index[dy:, x0 + dx : x1 + dx]
        wts = edge_weights(rgb[: hgt - dy, x0:x1], rgb[dy:, x0 + dx : x1 + dx], config.h)
        E[src.ravel(), dst.ravel()] = wts.ravel()
        E[dst.ravel(), src.ravel()] = wts.ravel()
    return normalize(E, np.zeros(n))

