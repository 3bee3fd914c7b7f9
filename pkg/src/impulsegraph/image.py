"""Raster image and damage-mask types plus the binary PNM (P5/P6) codec."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .errors import PnmLengthError, PnmParseError, UnsupportedFormatError

MAXVAL = 255
_WHITESPACE = b" \t\n\r\v\f"


class Rgb(NamedTuple):
    r: int
    g: int
    b: int


@dataclass(frozen=True, eq=False)
class Image:
    """An 8-bit raster image with 1 (gray) or 3 (RGB) channels.

    ``pixels`` has shape ``(height, width, channels)`` and is read-only, so an
    Image can be shared freely; derived images are built with ``replace`` or
    ``from_array``.
    """

    width: int
    height: int
    channels: int
    pixels: np.ndarray

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError(f"image dimensions must be positive, got {self.width}x{self.height}")
        if self.channels not in (1, 3):
            raise ValueError(f"channels must be 1 or 3, got {self.channels}")
        arr = np.asarray(self.pixels)
        if arr.size != self.width * self.height * self.channels:
            raise ValueError(
                f"pixel data has {arr.size} values, expected "
                f"{self.width * self.height * self.channels}"
            )
        if arr.dtype != np.uint8:
            if np.any(arr < 0) or np.any(arr > MAXVAL):
                raise ValueError("intensities must lie in [0, 255]")
        arr = np.array(arr, dtype=np.uint8).reshape(self.height, self.width, self.channels)
        arr.setflags(write=False)
        object.__setattr__(self, "pixels", arr)

    @classmethod
    def from_array(cls, arr) -> "Image":
        """Build an image from a ``(h, w)`` or ``(h, w, c)`` array."""
        arr = np.asarray(arr)
        if arr.ndim == 2:
            arr = arr[:, :, None]
        if arr.ndim != 3:
            raise ValueError(f"expected a 2-D or 3-D array, got shape {arr.shape}")
        h, w, c = arr.shape
        return cls(width=w, height=h, channels=c, pixels=arr)

    @classmethod
    def filled(cls, width: int, height: int, value, channels: int | None = None) -> "Image":
        value = np.atleast_1d(np.asarray(value))
        if channels is None:
            channels = value.size
        arr = np.empty((height, width, channels), dtype=np.uint8)
        arr[...] = value
        return cls(width, height, channels, arr)

    @property
    def data(self) -> np.ndarray:
        """Row-major flat view of the intensities."""
        return self.pixels.reshape(-1)

    def rgb(self) -> np.ndarray:
        """``(h, w, 3)`` array; gray images have their channel replicated."""
        if self.channels == 3:
            return self.pixels
        return np.repeat(self.pixels, 3, axis=2)

    def replace(self, pixels) -> "Image":
        return Image(self.width, self.height, self.channels, pixels)

    def __eq__(self, other):
        if not isinstance(other, Image):
            return NotImplemented
        return (
            self.width == other.width
            and self.height == other.height
            and self.channels == other.channels
            and np.array_equal(self.pixels, other.pixels)
        )

    def __repr__(self):
        return f"Image({self.width}x{self.height}, channels={self.channels})"


@dataclass(frozen=True, eq=False)
class DamageMask:
    """Per-pixel boolean grid; ``flags[y, x]`` is True for a damaged pixel."""

    width: int
    height: int
    flags: np.ndarray

    def __post_init__(self):
        arr = np.array(self.flags, dtype=bool)
        if arr.size != self.width * self.height:
            raise ValueError(
                f"mask has {arr.size} flags, expected {self.width * self.height}"
            )
        arr = arr.reshape(self.height, self.width)
        arr.setflags(write=False)
        object.__setattr__(self, "flags", arr)

    @classmethod
    def empty(cls, width: int, height: int) -> "DamageMask":
        return cls(width, height, np.zeros((height, width), dtype=bool))

    @classmethod
    def like(cls, image: Image, flags=None) -> "DamageMask":
        if flags is None:
            return cls.empty(image.width, image.height)
        return cls(image.width, image.height, flags)

    def count(self) -> int:
        return int(self.flags.sum())

    def coords(self) -> list[tuple[int, int]]:
        """Flagged ``(x, y)`` pairs in raster order."""
        ys, xs = np.nonzero(self.flags)
        return [(int(x), int(y)) for y, x in zip(ys, xs)]

    def matches(self, image: Image) -> bool:
        return self.width == image.width and self.height == image.height

    def to_image(self) -> Image:
        """Gray image with 255 for damaged and 0 for clean pixels."""
        return Image.from_array(np.where(self.flags, 255, 0).astype(np.uint8))

    @classmethod
    def from_image(cls, image: Image) -> "DamageMask":
        return cls(image.width, image.height, image.pixels[:, :, 0] != 0)

    def __eq__(self, other):
        if not isinstance(other, DamageMask):
            return NotImplemented
        return (
            self.width == other.width
            and self.height == other.height
            and np.array_equal(self.flags, other.flags)
        )

    def __repr__(self):
        return f"DamageMask({self.width}x{self.height}, flagged={self.count()})"


def get_pixel(image: Image, x: int, y: int) -> Rgb:
    if not (0 <= x < image.width and 0 <= y < image.height):
        raise IndexError(f"pixel ({x}, {y}) outside {image.width}x{image.height} image")
    px = image.pixels[y, x]
    if image.channels == 1:
        g = int(px[0])
        return Rgb(g, g, g)
    return Rgb(int(px[0]), int(px[1]), int(px[2]))


def _read_token(buf: bytes, pos: int) -> tuple[bytes, int, int]:
    """Return (token, token_start, position after token), skipping whitespace and comments."""
    n = len(buf)
    while pos < n:
        ch = buf[pos : pos + 1]
        if ch == b"#":
            end = buf.find(b"\n", pos)
            pos = n if end < 0 else end + 1
        elif ch in _WHITESPACE:
            pos += 1
        else:
            break
    start = pos
    while pos < n and buf[pos : pos + 1] not in _WHITESPACE and buf[pos : pos + 1] != b"#":
        pos += 1
    if start == pos:
        raise PnmParseError("unexpected end of header", start)
    return buf[start:pos], start, pos


def _read_int(buf: bytes, pos: int, what: str) -> tuple[int, int]:
    tok, start, pos = _read_token(buf, pos)
    if not tok.isdigit():
        raise PnmParseError(f"invalid {what} {tok!r}", start)
    return int(tok), pos


def load_pnm(data: bytes) -> Image:
    """Decode a binary P5 (gray) or P6 (color) stream with maxval 255."""
    data = bytes(data)
    if data[:2] not in (b"P5", b"P6"):
        raise PnmParseError(f"bad magic {data[:2]!r}, expected P5 or P6", 0)
    channels = 1 if data[:2] == b"P5" else 3
    pos = 2
    if pos < len(data) and data[pos : pos + 1] not in _WHITESPACE and data[pos : pos + 1] != b"#":
        raise PnmParseError("missing whitespace after magic", pos)
    width, pos = _read_int(data, pos, "width")
    height, pos = _read_int(data, pos, "height")
    maxval_start = pos
    maxval, pos = _read_int(data, pos, "maxval")
    if width < 1 or height < 1:
        raise PnmParseError(f"non-positive dimensions {width}x{height}", maxval_start)
    if maxval != MAXVAL:
        raise UnsupportedFormatError(f"maxval {maxval} is not supported (only 255)")
    if pos >= len(data) or data[pos : pos + 1] not in _WHITESPACE:
        raise PnmParseError("missing whitespace before raster data", pos)
    pos += 1
    expected = width * height * channels
    payload = data[pos:]
    if len(payload) != expected:
        raise PnmLengthError(
            f"payload has {len(payload)} bytes, header implies {expected}"
        )
    arr = np.frombuffer(payload, dtype=np.uint8).reshape(height, width, channels)
    return Image(width, height, channels, arr)


def save_pnm(image: Image) -> bytes:
    magic = b"P5" if image.channels == 1 else b"P6"
    header = magic + f"\n{image.width} {image.height}\n{MAXVAL}\n".encode("ascii")
    return header + image.pixels.tobytes()


def read_image(path) -> Image:
    return load_pnm(Path(path).read_bytes())


def write_image(path, image: Image) -> None:
    Path(path).write_bytes(save_pnm(image))
