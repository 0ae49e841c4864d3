"""Grayscale rendering of scaleogram magnitudes as binary PGM.

Values are min-max normalised to [0, 1] (after ``log1p`` for the log map) and
scaled to bytes with round-half-up, ``floor(255 * x + 0.5)``.  Row 0 is the
smallest scale.  A constant matrix renders black.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

__all__ = ["GrayImage", "scaleogram_to_image", "write_pgm"]


@dataclass(frozen=True, eq=False)
class GrayImage:
    width: int
    height: int
    pixels: bytes

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("image dimensions must be positive")
        if len(self.pixels) != self.width * self.height:
            raise ValueError(f"expected {self.width * self.height} pixels, got {len(self.pixels)}")

    def as_array(self) -> np.ndarray:
        return np.frombuffer(self.pixels, dtype=np.uint8).reshape(self.height, self.width)


def scaleogram_to_image(magnitudes, value_map: str = "log") -> GrayImage:
    m = np.asarray(magnitudes, dtype=np.float64)
    if m.ndim != 2 or m.size == 0:
        raise ConfigError("scaleogram matrix must be 2-D and non-empty")
    if not np.all(np.isfinite(m)) or np.any(m < 0):
        raise ConfigError("magnitudes must be finite and non-negative")
    if value_map == "log":
        m = np.log1p(m)
    elif value_map != "linear":
        raise ConfigError(f"value map must be 'log' or 'linear', got {value_map!r}")
    lo, hi = m.min(), m.max()
    if hi > lo:
        px = np.floor(255.0 * ((m - lo) / (hi - lo)) + 0.5)
    else:
        px = np.zeros_like(m)
    px = np.clip(px, 0, 255).astype(np.uint8)
    return GrayImage(width=m.shape[1], height=m.shape[0], pixels=px.tobytes())


def write_pgm(image: GrayImage) -> bytes:
    return f"P5\n{image.width} {image.height}\n255\n".encode("ascii") + image.pixels
