"""RGB raster images and PNG I/O."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image


@dataclass(frozen=True)
class RasterImage:
    """8-bit RGB pixel grid, stored as an (H, W, 3) uint8 array."""

    array: np.ndarray

    def __post_init__(self):
        a = self.array
        if a.ndim != 3 or a.shape[2] != 3 or a.dtype != np.uint8:
            raise ValueError(f"expected (H, W, 3) uint8 array, got {a.shape} {a.dtype}")
        if a.shape[0] < 1 or a.shape[1] < 1:
            raise ValueError("image must be at least 1x1")

    @property
    def width(self) -> int:
        return self.array.shape[1]

    @property
    def height(self) -> int:
        return self.array.shape[0]

    @classmethod
    def from_array(cls, array: np.ndarray) -> "RasterImage":
        """Accepts RGB or RGBA uint8 input; alpha is dropped."""
        a = np.asarray(array)
        if a.ndim == 3 and a.shape[2] == 4:
            a = a[:, :, :3]
        if a.ndim == 2:
            a = np.stack([a, a, a], axis=2)
        return cls(np.ascontiguousarray(a, dtype=np.uint8))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RasterImage):
            return NotImplemented
        return np.array_equal(self.array, other.array)


def load_png(path: str | Path) -> RasterImage:
    with Image.open(path) as im:
        return RasterImage.from_array(np.asarray(im.convert("RGB")))


def save_png(image: RasterImage, path: str | Path) -> None:
    Image.fromarray(image.array, mode="RGB").save(path, format="PNG")


def save_gray16_png(values: np.ndarray, path: str | Path) -> None:
    """Write a (H, W) integer array as 16-bit grayscale PNG."""
    a = np.asarray(values)
    if a.min() < 0 or a.max() > 65535:
        raise ValueError(f"values outside the 16-bit range: [{a.min()}, {a.max()}]")
    Image.fromarray(a.astype(np.uint16)).save(path, format="PNG")


def load_gray16_png(path: str | Path) -> np.ndarray:
    with Image.open(path) as im:
        a = np.asarray(im)
    if a.ndim != 2:
        raise ValueError(f"expected single-channel PNG, got shape {a.shape}")
    return a.astype(np.int64)
