"""Synthetic image fixtures shared across test modules."""

from __future__ import annotations

import numpy as np

from argseg import RasterImage


def flat_image(width: int, height: int, color=(90, 120, 200)) -> RasterImage:
    a = np.zeros((height, width, 3), dtype=np.uint8)
    a[:, :] = color
    return RasterImage(a)


def two_tone_image(width: int = 32, height: int = 32) -> tuple[RasterImage, np.ndarray]:
    """Dark left half, bright right half, plus the ground-truth label grid."""
    a = np.zeros((height, width, 3), dtype=np.uint8)
    a[:, : width // 2] = (20, 20, 20)
    a[:, width // 2:] = (230, 230, 230)
    truth = np.zeros((height, width), dtype=np.int64)
    truth[:, width // 2:] = 1
    return RasterImage(a), truth


def noisy_rectangles_image(
    seed: int = 0,
    size: int = 128,
    sigma: float = 5.0,
) -> tuple[RasterImage, np.ndarray]:
    """Three flat-color rectangles tiling the frame, with Gaussian noise.

    Layout: left half is object 0; the right half splits horizontally
    into objects 1 (top) and 2 (bottom).  Returns the image and the
    ground-truth object grid.
    """
    rng = np.random.default_rng(seed)
    half = size // 2
    base = np.zeros((size, size, 3), dtype=np.float64)
    truth = np.zeros((size, size), dtype=np.int64)
    base[:, :half] = (200, 40, 40)
    base[:half, half:] = (40, 200, 40)
    truth[:half, half:] = 1
    base[half:, half:] = (40, 40, 200)
    truth[half:, half:] = 2
    noisy = base + rng.normal(0.0, sigma, size=base.shape)
    return RasterImage(np.clip(noisy, 0, 255).astype(np.uint8)), truth


def noisy_fixture_64(seed: int = 7) -> RasterImage:
    """Fixed 64x64 noisy image for determinism checks."""
    rng = np.random.default_rng(seed)
    a = rng.integers(0, 256, size=(64, 64, 3), dtype=np.uint8)
    return RasterImage(a)


def two_tone_setup(w: int = 16, h: int = 16):
    """Two-tone image, its truth grid, and one stroke per tone."""
    from argseg import StrokeLayer, StrokeSet

    img, truth = two_tone_image(w, h)
    strokes = StrokeSet([
        StrokeLayer(0, (255, 0, 0), [[(2, 2), (2, h - 3)]], brush_width=1),
        StrokeLayer(1, (0, 255, 0), [[(w - 3, 2), (w - 3, h - 3)]], brush_width=1),
    ])
    return img, truth, strokes
