"""Impulse-noise detection and restoration by modularity merge tests.

Detection visits every pixel, tries to merge it with each neighbour and
records the modularity change of that merge. A pixel whose merges mostly
lower modularity does not belong to any neighbouring community and is
flagged as damaged.

Restoration scans candidate values between the usable neighbours' minimum
and maximum and keeps the one whose merge into the community formed by those
neighbours gains the most modularity.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from ._kernels import TIE_TOL, scan_pixels
from .errors import DegenerateGraphError
from .image import DamageMask, Image, Rgb
from .lattice import (
    BORDERS,
    DENSE_VERTEX_CAP,
    GraphConfig,
    _lattice_matrix,
    global_graph,
    neighbors,
    reflect_supported,
    window_context,
    window_graph,
)
from .modularity import delta_q

log = logging.getLogger(__name__)

SCOPES = ("window3x3", "global")
AGGREGATIONS = ("count", "all")
SCORINGS = ("sum", "max")
# "usable": restoration graph holds p and its usable neighbours only;
# "window": every in-window neighbour, flagged ones included
RESTORE_GRAPHS = ("usable", "window")

# window positions as (dx, dy), row-major; index 4 is the centre
_WINDOW = tuple((dx, dy) for dy in (-1, 0, 1) for dx in (-1, 0, 1))
_CENTER = 4
_WINDOW_EDGES = tuple(
    (i, j)
    for i in range(9)
    for j in range(i + 1, 9)
    if max(abs(_WINDOW[i][0] - _WINDOW[j][0]), abs(_WINDOW[i][1] - _WINDOW[j][1])) == 1
)


@dataclass(frozen=True)
class FilterConfig:
    graph: GraphConfig = field(default_factory=GraphConfig)
    scope: str = "window3x3"
    epsilon: float = 1e-12
    k_min_negative: int = 4
    max_passes: int = 8
    aggregation: str = "count"
    border: str = "reflect"
    scoring: str = "sum"
    restore_graph: str = "usable"
    detection_rounds: int = 2
    confirm: bool = True
    dense_cap: int = DENSE_VERTEX_CAP

    def __post_init__(self):
        if self.scope not in SCOPES:
            raise ValueError(f"scope must be one of {SCOPES}, got {self.scope!r}")
        if self.aggregation not in AGGREGATIONS:
            raise ValueError(f"aggregation must be one of {AGGREGATIONS}, got {self.aggregation!r}")
        if self.scoring not in SCORINGS:
            raise ValueError(f"scoring must be one of {SCORINGS}, got {self.scoring!r}")
        if self.restore_graph not in RESTORE_GRAPHS:
            raise ValueError(f"restore_graph must be one of {RESTORE_GRAPHS}, got {self.restore_graph!r}")
        if self.detection_rounds < 1:
            raise ValueError(f"detection_rounds must be at least 1, got {self.detection_rounds}")
        if self.border not in BORDERS:
            raise ValueError(f"border must be one of {BORDERS}, got {self.border!r}")
        if not self.epsilon >= 0:
            raise ValueError(f"epsilon must be non-negative, got {self.epsilon}")
        if not 1 <= self.k_min_negative <= 8:
            raise ValueError(f"k_min_negative must be in [1, 8], got {self.k_min_negative}")
        if self.max_passes < 1:
            raise ValueError(f"max_passes must be at least 1, got {self.max_passes}")

    @classmethod
    def create(cls, h: float = GraphConfig.h, **kwargs) -> "FilterConfig":
        return cls(graph=GraphConfig(h), **kwargs)

    @property
    def h(self) -> float:
        return self.graph.h


def _window_border(image: Image, config: FilterConfig) -> str:
    if config.border == "reflect" and not reflect_supported(image.width, image.height):
        return "clip"
    return config.border


# ---------------------------------------------------------------- detection


def pixel_deltas(image: Image, p, config: FilterConfig) -> list[tuple[tuple[int, int], float]]:
    """Merge gains of pixel ``p`` with each of its neighbours.

    With the window scope the gains come from the 3x3 window graph centred
    on ``p``; under ``reflect`` borders a border pixel still gets eight
    entries, the out-of-image ones labelled with their mirror pixel. With the
    global scope they come from the whole-image graph.
    """
    x, y = p
    if config.scope == "global":
        nbrs = neighbors(x, y, image.width, image.height)
        if not nbrs:
            return []
        M = global_graph(image, config.graph, cap=config.dense_cap)
        i = y * image.width + x
        return [((u, v), delta_q(M, i, v * image.width + u)) for u, v in nbrs]
    try:
        M, ctx = window_graph(image, p, config.graph, border=_window_border(image, config))
    except DegenerateGraphError:
        return []
    c = ctx.center_index
    return [
        (ctx.sources[k], delta_q(M, c, k)) for k in range(len(ctx.members)) if k != c
    ]


def decide(values, config: FilterConfig) -> bool:
    """The damage rule applied to one pixel's merge gains."""
    values = list(values)
    if not values:
        return False
    negative = sum(1 for d in values if d < -config.epsilon)
    if config.aggregation == "all":
        return negative == len(values)
    return negative >= min(config.k_min_negative, len(values))


def _padded(image: Image, border: str):
    rgb = image.rgb().astype(np.float64)
    if border == "reflect":
        padded = np.pad(rgb, ((1, 1), (1, 1), (0, 0)), mode="reflect")
        valid = np.ones(padded.shape[:2], dtype=bool)
    else:
        padded = np.pad(rgb, ((1, 1), (1, 1), (0, 0)), mode="edge")
        valid = np.pad(np.ones(rgb.shape[:2], dtype=bool), 1, constant_values=False)
    return padded, valid


def window_delta_field(image: Image, config: FilterConfig):
    """Merge gains of every pixel with its 8 window neighbours, vectorised.

    Returns ``(deltas, present)``: arrays of shape ``(8, height, width)``.
    ``present`` is False where the neighbour position does not exist (clipped
    border) or the window graph is degenerate; ``deltas`` is 0 there.
    """
    border = _window_border(image, config)
    padded, valid = _padded(image, border)
    H, W = image.height, image.width

    def cells(k):
        dx, dy = _WINDOW[k]
        return (slice(1 + dy, 1 + dy + H), slice(1 + dx, 1 + dx + W))

    cols = [padded[cells(k)] for k in range(9)]
    ok = [valid[cells(k)] for k in range(9)]
    strength = [np.zeros((H, W)) for _ in range(9)]
    weight = {}
    for i, j in _WINDOW_EDGES:
        diff = cols[i] - cols[j]
        w = np.exp(-np.sqrt(np.sum(diff * diff, axis=-1)) / config.h)
        w = np.where(ok[i] & ok[j], w, 0.0)
        weight[i, j] = w
        strength[i] += w
        strength[j] += w
    m = np.sum(strength, axis=0)
    nondegenerate = m > 0
    safe_m = np.where(nondegenerate, m, 1.0)
    a_c = strength[_CENTER] / safe_m
    deltas = np.zeros((8, H, W))
    present = np.zeros((8, H, W), dtype=bool)
    for slot, k in enumerate(k for k in range(9) if k != _CENTER):
        w = weight[min(k, _CENTER), max(k, _CENTER)]
        deltas[slot] = 2.0 * (w / safe_m - a_c * (strength[k] / safe_m))
        present[slot] = ok[k] & nondegenerate
    deltas[~present] = 0.0
    return deltas, present


def _global_delta_field(image: Image, config: FilterConfig):
    M = global_graph(image, config.graph, cap=config.dense_cap)
    H, W = image.height, image.width
    deltas = np.zeros((8, H, W))
    present = np.zeros((8, H, W), dtype=bool)
    ys, xs = np.mgrid[0:H, 0:W]
    idx = ys * W + xs
    for slot, (dx, dy) in enumerate((dx, dy) for dx, dy in _WINDOW if (dx, dy) != (0, 0)):
        nx, ny = xs + dx, ys + dy
        inside = (nx >= 0) & (nx < W) & (ny >= 0) & (ny < H)
        i = idx[inside]
        j = ny[inside] * W + nx[inside]
        d = np.zeros((H, W))
        d[inside] = 2.0 * (M.e[i, j] - M.a[i] * M.a[j])
        deltas[slot] = d
        present[slot] = inside
    return deltas, present


def detect_once(image: Image, config: FilterConfig = FilterConfig()) -> DamageMask:
    """Apply the damage rule to every pixel of ``image``."""
    if config.scope == "global":
        deltas, present = _global_delta_field(image, config)
    else:
        deltas, present = window_delta_field(image, config)
    n = present.sum(axis=0)
    negative = ((deltas < -config.epsilon) & present).sum(axis=0)
    if config.aggregation == "all":
        flags = (n > 0) & (negative == n)
    else:
        flags = (n > 0) & (negative >= np.minimum(config.k_min_negative, n))
    return DamageMask(image.width, image.height, flags)


def _detection_rounds(image: Image, config: FilterConfig):
    """Run the rule, repair provisionally and re-run on the repaired image.

    Two adjacent outliers shield each other from the rule; once one of them
    is repaired the other stands alone and is caught in the next round.
    With ``confirm`` a flagged pixel whose repair reproduces its observed
    colour is dropped from the mask. Returns the mask and, when it is still
    valid for that mask, the provisional restoration.
    """
    flags = detect_once(image, config).flags.copy()
    restored = None
    for _ in range(config.detection_rounds - 1):
        if not flags.any():
            break
        restored = restore(image, DamageMask(image.width, image.height, flags), config)
        new = detect_once(restored, config).flags & ~flags
        if not new.any():
            break
        flags |= new
        restored = None
    if config.confirm and flags.any():
        if restored is None:
            restored = restore(image, DamageMask(image.width, image.height, flags), config)
        changed = np.any(restored.pixels != image.pixels, axis=2)
        if np.any(flags & ~changed):
            flags &= changed
            restored = None
    return DamageMask(image.width, image.height, flags), restored


def detect(image: Image, config: FilterConfig = FilterConfig()) -> DamageMask:
    """Damage mask of ``image``: the union over ``config.detection_rounds`` rounds."""
    return _detection_rounds(image, config)[0]


# -------------------------------------------------------------- restoration


def _lower_median(values: np.ndarray) -> np.ndarray:
    s = np.sort(values, axis=0)
    return s[(len(s) - 1) // 2]


def scan_pixel_reference(work: np.ndarray, damaged: np.ndarray, x: int, y: int,
                         config: FilterConfig, gray: bool, border: str,
                         fallback: bool = False):
    """Best colour for pixel (x, y) given the working image, or None to defer.

    Vectorised reference for the compiled scan used by :func:`restore`.

    ``work`` is an ``(h, w, 3)`` int array, ``damaged`` the current flags.
    In fallback mode every neighbour is usable and the scan covers 0..255.
    """
    H, W = damaged.shape
    ctx = window_context(W, H, (x, y), border)
    nb = [k for k in range(len(ctx.members)) if k != ctx.center_index]
    if not nb:
        return None
    src = [ctx.sources[k] for k in nb]
    usable = np.array([fallback or not damaged[sy, sx] for sx, sy in src])
    if not usable.any():
        return None
    if config.restore_graph == "usable":
        nb = [k for k, ok in zip(nb, usable) if ok]
        src = [ctx.sources[k] for k in nb]
        usable = usable[usable]
    colors = np.array([work[sy, sx] for sx, sy in src], dtype=np.float64)
    ring = _lattice_matrix([ctx.members[k] for k in nb], colors, config.h)
    s_fixed = ring.sum(axis=1)
    m_fixed = s_fixed.sum()

    used = colors[usable]
    color = _lower_median(used).copy()
    channels = (0,) if gray else (0, 1, 2)
    for ch in channels:
        if fallback:
            lo, hi = 0, 255
        else:
            lo, hi = int(used[:, ch].min()), int(used[:, ch].max())
        values = np.arange(lo, hi + 1, dtype=np.float64)
        cand = np.broadcast_to(color, (len(values), 3)).copy()
        if gray:
            cand[:] = values[:, None]
        else:
            cand[:, ch] = values
        diff = cand[:, None, :] - colors[None, :, :]
        w = np.exp(-np.sqrt(np.sum(diff * diff, axis=-1)) / config.h)
        s_p = w.sum(axis=1)
        m = m_fixed + 2.0 * s_p
        with np.errstate(divide="ignore", invalid="ignore"):
            a_p = s_p / m
            dq = 2.0 * (w / m[:, None] - a_p[:, None] * ((s_fixed[None, :] + w) / m[:, None]))
        if config.scoring == "sum":
            # gain of joining the community formed by all usable neighbours
            gain = dq[:, usable].sum(axis=1)
        else:
            gain = dq[:, usable].max(axis=1)
        score = np.where(m > 0, gain, -np.inf)
        best = values[int(np.argmax(score >= score.max() - TIE_TOL))]
        if gray:
            color[:] = best
        else:
            color[ch] = best
    return color.astype(np.int64)


def restore_pixel(image: Image, mask: DamageMask, p, config: FilterConfig = FilterConfig()):
    """Restored colour for flagged pixel ``p`` using the unflagged neighbours.

    Returns None when every neighbour is itself flagged (the caller defers
    the pixel to a later pass).
    """
    x, y = p
    if not (0 <= x < image.width and 0 <= y < image.height):
        raise IndexError(f"pixel ({x}, {y}) outside {image.width}x{image.height} image")
    if not mask.matches(image):
        raise ValueError("mask dimensions do not match the image")
    if not mask.flags[y, x]:
        raise ValueError(f"pixel ({x}, {y}) is not flagged as damaged")
    work = image.rgb().astype(np.int64)
    deferred = _scan(work, mask.flags.copy(), [(x, y)], config,
                     image.channels == 1, _window_border(image, config))
    if deferred:
        return None
    return Rgb(*(int(v) for v in work[y, x]))


def _scan(work, damaged, coords, config, gray, border, fallback=False):
    """Run the compiled scan over ``coords`` in order; returns deferred coords."""
    if not coords:
        return []
    xs = np.array([c[0] for c in coords], dtype=np.int64)
    ys = np.array([c[1] for c in coords], dtype=np.int64)
    deferred = scan_pixels(work, damaged, xs, ys, float(config.h), gray,
                           border == "reflect", config.scoring == "sum", fallback,
                           config.restore_graph == "usable")
    return [c for c, d in zip(coords, deferred) if d]


def restore(image: Image, mask: DamageMask, config: FilterConfig = FilterConfig()) -> Image:
    """Recolour every flagged pixel; unflagged pixels are copied untouched.

    Pixels are processed in raster order and a restored pixel is usable by
    the pixels after it. Pixels with no usable neighbour are retried in later
    passes; after ``max_passes`` the rest are scanned over 0..255 against all
    neighbours regardless of flags.
    """
    if not mask.matches(image):
        raise ValueError(
            f"mask is {mask.width}x{mask.height} but image is {image.width}x{image.height}"
        )
    gray = image.channels == 1
    border = _window_border(image, config)
    work = image.rgb().astype(np.int64)
    damaged = mask.flags.copy()
    pending = mask.coords()
    passes = 0
    while pending and passes < config.max_passes:
        passes += 1
        pending = _scan(work, damaged, pending, config, gray, border)
    if pending:
        log.debug("%d pixels unrestorable after %d passes, using fallback", len(pending), passes)
        _scan(work, damaged, pending, config, gray, border, fallback=True)
    out = work[:, :, :1] if gray else work
    result = np.where(mask.flags[:, :, None], out, image.pixels)
    return image.replace(result.astype(np.uint8))


def denoise(image: Image, config: FilterConfig = FilterConfig()) -> tuple[Image, DamageMask]:
    mask, restored = _detection_rounds(image, config)
    if restored is None:
        restored = restore(image, mask, config)
    return restored, mask
