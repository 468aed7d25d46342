"""Deterministic watershed oversegmentation.

The partition is produced by a priority flood on the morphological
gradient of the (optionally box-blurred) luminance:

1. luminance, Rec.601 weights, scaled to [0, 1];
2. optional box blur of the given radius to curb noise-induced minima;
3. morphological gradient, max minus min over each 3x3 neighborhood
   clamped at the borders;
4. regional minima of the gradient (4-connected plateaus with no lower
   4-neighbor anywhere on the plateau) become seeds, numbered in
   row-major order of their first pixel;
5. seeds flood outward through a priority queue keyed by
   (gradient value, insertion sequence); a pixel is claimed by the first
   region that reaches it.

Every step is a pure function of the input, so two runs on the same
image give bit-identical partitions.  Floods are 4-connected; ridge
pixels are absorbed into the first-claiming region, there is no
separate boundary label.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import ndimage

from .image import RasterImage, load_gray16_png, save_gray16_png

FOUR_CONNECTED = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)

# Rec.601 luma weights.
_LUMA = np.array([0.299, 0.587, 0.114])


@dataclass(frozen=True)
class WatershedParams:
    smoothing_radius: int = 1

    def __post_init__(self):
        if not 0 <= self.smoothing_radius <= 8:
            raise ValueError(
                f"smoothing_radius must be within [0, 8], got {self.smoothing_radius}"
            )


@dataclass(frozen=True)
class RegionPartition:
    """Per-pixel region ids, dense in [0, region_count)."""

    region_ids: np.ndarray
    region_count: int

    @property
    def width(self) -> int:
        return self.region_ids.shape[1]

    @property
    def height(self) -> int:
        return self.region_ids.shape[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RegionPartition):
            return NotImplemented
        return self.region_count == other.region_count and np.array_equal(
            self.region_ids, other.region_ids
        )


def luminance(image: RasterImage) -> np.ndarray:
    """Per-pixel Rec.601 luminance in [0, 1], float64 (H, W)."""
    return image.array.astype(np.float64) @ _LUMA / 255.0


def gradient_magnitude(lum: np.ndarray) -> np.ndarray:
    """Morphological gradient: 3x3 max minus min, borders clamped."""
    if lum.size == 0:
        raise ValueError("empty luminance grid")
    hi = ndimage.maximum_filter(lum, size=3, mode="nearest")
    lo = ndimage.minimum_filter(lum, size=3, mode="nearest")
    return hi - lo


def _box_blur(lum: np.ndarray, radius: int) -> np.ndarray:
    if radius <= 0:
        return lum
    return ndimage.uniform_filter(lum, size=2 * radius + 1, mode="nearest")


def _regional_minima(grad: np.ndarray) -> np.ndarray:
    """Boolean mask of regional minima under 4-connectivity.

    A pixel belongs to the mask iff its whole equal-value plateau has no
    strictly lower 4-neighbor.
    """
    # Pixels with no strictly lower 4-neighbor.  Replicated border values
    # equal the pixel itself, which cannot be strictly lower.
    neighbor_min = ndimage.minimum_filter(
        grad, footprint=FOUR_CONNECTED, mode="nearest"
    )
    no_lower = neighbor_min >= grad

    # A candidate adjacent to an equal-valued pixel outside the candidate
    # set sits on a plateau that leaks downhill somewhere; its whole
    # component must be discarded.  One pass suffices because every
    # component of a partially-minimal plateau touches the leaking part.
    bad = np.zeros_like(no_lower)
    for axis, shift in ((0, 1), (0, -1), (1, 1), (1, -1)):
        neighbor_val = np.roll(grad, shift, axis=axis)
        neighbor_ok = np.roll(no_lower, shift, axis=axis)
        edge = np.zeros_like(no_lower)
        # roll wraps around; mask out the wrapped row/column
        idx = [slice(None), slice(None)]
        idx[axis] = 0 if shift == 1 else -1
        contact = no_lower & ~neighbor_ok & (neighbor_val == grad)
        contact[tuple(idx)] = False
        bad |= contact

    labels, count = ndimage.label(no_lower, structure=FOUR_CONNECTED)
    if count == 0:
        return no_lower  # cannot happen: the global minimum always qualifies
    bad_components = np.unique(labels[bad])
    keep = np.ones(count + 1, dtype=bool)
    keep[bad_components] = False
    keep[0] = False
    return keep[labels]


def _number_seeds(minima: np.ndarray) -> tuple[np.ndarray, int]:
    """Label minima components 0..K-1 in row-major order of first pixel."""
    labels, count = ndimage.label(minima, structure=FOUR_CONNECTED)
    vals, first = np.unique(labels.ravel(), return_index=True)
    keep = vals > 0
    order = vals[keep][np.argsort(first[keep], kind="stable")]
    remap = np.full(count + 1, -1, dtype=np.int64)
    remap[order] = np.arange(order.shape[0])
    return remap[labels], count


def watershed(image: RasterImage, params: WatershedParams | None = None) -> RegionPartition:
    """Priority-flood watershed of the image gradient."""
    params = params or WatershedParams()
    grad = gradient_magnitude(_box_blur(luminance(image), params.smoothing_radius))
    seeds, count = _number_seeds(_regional_minima(grad))

    h, w = grad.shape
    size = h * w
    labels = seeds.ravel().tolist()
    grad_flat = grad.ravel().tolist()

    heap: list[tuple[float, int, int]] = []
    seq = 0
    for idx, lab in enumerate(labels):
        if lab >= 0:
            heap.append((grad_flat[idx], seq, idx))
            seq += 1
    heapq.heapify(heap)

    push = heapq.heappush
    # Fixed neighbor order: up, left, right, down.
    while heap:
        _, _, idx = heapq.heappop(heap)
        lab = labels[idx]
        x = idx % w
        n = idx - w
        if n >= 0 and labels[n] < 0:
            labels[n] = lab
            push(heap, (grad_flat[n], seq, n))
            seq += 1
        if x > 0 and labels[idx - 1] < 0:
            n = idx - 1
            labels[n] = lab
            push(heap, (grad_flat[n], seq, n))
            seq += 1
        if x < w - 1 and labels[idx + 1] < 0:
            n = idx + 1
            labels[n] = lab
            push(heap, (grad_flat[n], seq, n))
            seq += 1
        n = idx + w
        if n < size and labels[n] < 0:
            labels[n] = lab
            push(heap, (grad_flat[n], seq, n))
            seq += 1

    return RegionPartition(
        np.array(labels, dtype=np.int32).reshape(h, w), count
    )


def region_stats(
    image: RasterImage, partition: RegionPartition
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-region mean RGB in [0, 1], centroid (x, y), and pixel count.

    Centroids are arithmetic means of member pixel coordinates, with
    pixel centers at integer positions, origin top-left, x rightward,
    y downward.
    """
    if (partition.height, partition.width) != (image.height, image.width):
        raise ValueError(
            f"partition {partition.width}x{partition.height} does not match "
            f"image {image.width}x{image.height}"
        )
    ids = partition.region_ids.ravel()
    n = partition.region_count
    counts = np.bincount(ids, minlength=n)

    means = np.empty((n, 3), dtype=np.float64)
    pixels = image.array.reshape(-1, 3).astype(np.float64)
    for c in range(3):
        means[:, c] = np.bincount(ids, weights=pixels[:, c], minlength=n)
    means /= counts[:, None] * 255.0

    ys, xs = np.indices((partition.height, partition.width))
    centroids = np.empty((n, 2), dtype=np.float64)
    centroids[:, 0] = np.bincount(ids, weights=xs.ravel(), minlength=n) / counts
    centroids[:, 1] = np.bincount(ids, weights=ys.ravel(), minlength=n) / counts
    return means, centroids, counts


def region_adjacency(partition: RegionPartition) -> set[tuple[int, int]]:
    """Unordered pairs of region ids that touch under 4-connectivity."""
    ids = partition.region_ids
    pairs = []
    for a, b in ((ids[:, :-1], ids[:, 1:]), (ids[:-1, :], ids[1:, :])):
        differ = a != b
        lo = np.minimum(a[differ], b[differ])
        hi = np.maximum(a[differ], b[differ])
        pairs.append(np.stack([lo, hi], axis=1))
    stacked = np.unique(np.concatenate(pairs), axis=0)
    return {(int(a), int(b)) for a, b in stacked}


def save_partition(partition: RegionPartition, path: str | Path) -> None:
    """Export region ids as 16-bit grayscale PNG plus a JSON sidecar."""
    if partition.region_count > 65536:
        raise ValueError(
            f"cannot export {partition.region_count} regions: ids exceed 65535"
        )
    save_gray16_png(partition.region_ids, path)
    sidecar = Path(path).with_suffix(".json")
    sidecar.write_text(json.dumps({"region_count": partition.region_count}))


def load_partition(path: str | Path) -> RegionPartition:
    ids = load_gray16_png(path)
    sidecar = Path(path).with_suffix(".json")
    count = json.loads(sidecar.read_text())["region_count"]
    return RegionPartition(ids.astype(np.int32), int(count))
