"""End-to-end segmentation: strokes to ARGs to labelled pixels.

Both graphs live in the same rect-local frame: the model rect is the
bounding box of the rasterized strokes, vertices are watershed regions
(all regions touching the rect for the input graph, stroke-hit regions
for the model), centroids are shifted by the rect origin, and d_max is
the rect diagonal.  A shared normalizer keeps the deformed and original
relational vectors comparable, and the local frame makes a saved model
("stamp") translation invariant when applied elsewhere.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .graph import ARG
from .image import RasterImage, save_gray16_png
from .matching import LabelAssignment, MatchParams, match_graphs
from .strokes import UNLABELLED_ID, StrokeSet, rasterize_strokes
from .watershed import (
    RegionPartition,
    WatershedParams,
    region_adjacency,
    region_stats,
    watershed,
)

MODEL_PACK_VERSION = 1


class EmptyModelError(ValueError):
    """No stroke pixel hits the image, so no model vertex exists."""


class EmptyInputError(ValueError):
    """No watershed region intersects the requested rectangle."""


class InvalidPlacementError(ValueError):
    """A stamp was placed entirely outside the target image."""


class AmbiguousLabelWarning(UserWarning):
    """A single watershed region was hit by strokes of several labels."""


@dataclass(frozen=True)
class Rect:
    x: int
    y: int
    width: int
    height: int

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError(f"degenerate rect {self}")

    @property
    def diagonal(self) -> float:
        return math.sqrt(self.width * self.width + self.height * self.height)

    def clip(self, width: int, height: int) -> tuple[int, int, int, int]:
        """Intersection with a (width x height) image as (x0, y0, x1, y1),
        half-open; empty intersections collapse to zero area."""
        x0 = max(self.x, 0)
        y0 = max(self.y, 0)
        x1 = min(self.x + self.width, width)
        y1 = min(self.y + self.height, height)
        return x0, y0, max(x1, x0), max(y1, y0)


@dataclass
class RegionMatch:
    vertex_id: int
    label_id: int
    cost: float


@dataclass
class SegmentationResult:
    label_map: np.ndarray  # (H, W) uint16, UNLABELLED_ID where unassigned
    regions: dict[int, RegionMatch]
    params: MatchParams
    rect: Rect


@dataclass
class ModelPack:
    """A reusable stamp: the model graph in rect-local coordinates."""

    model_arg: ARG
    rect: Rect
    label_table: dict[int, tuple[int, int, int]]
    params_default: MatchParams = field(default_factory=MatchParams)
    format_version: int = MODEL_PACK_VERSION

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ModelPack):
            return NotImplemented
        return (
            self.model_arg == other.model_arg
            and self.rect == other.rect
            and self.label_table == other.label_table
            and self.params_default == other.params_default
            and self.format_version == other.format_version
        )


def _retained_regions(partition: RegionPartition, rect: Rect) -> np.ndarray:
    x0, y0, x1, y1 = rect.clip(partition.width, partition.height)
    window = partition.region_ids[y0:y1, x0:x1]
    return np.unique(window)


def build_input_arg(image: RasterImage, partition: RegionPartition, rect: Rect) -> ARG:
    """One vertex per region with at least one pixel inside the rect.

    Attributes are computed over the whole region, not the clipped part;
    centroids are expressed rect-locally.  Adjacent retained regions get
    both directed edges.
    """
    retained = _retained_regions(partition, rect)
    if retained.size == 0:
        raise EmptyInputError(f"no region intersects rect {rect}")
    means, centroids, counts = region_stats(image, partition)
    arg = ARG(d_max=rect.diagonal, attribute_arity=3)
    for rid in retained.tolist():
        arg.add_vertex(
            rid,
            tuple(means[rid]),
            (centroids[rid, 0] - rect.x, centroids[rid, 1] - rect.y),
            pixel_count=int(counts[rid]),
        )
    kept = set(retained.tolist())
    for a, b in sorted(region_adjacency(partition)):
        if a in kept and b in kept:
            arg.add_adjacency(a, b)
    return arg


def _vote_labels(
    label_raster: np.ndarray, partition: RegionPartition
) -> dict[int, int]:
    """Majority stroke label per stroke-hit region, ties to the smaller id."""
    hit = label_raster >= 0
    regions = partition.region_ids[hit]
    labels = label_raster[hit]
    votes: dict[int, dict[int, int]] = {}
    for rid, lab in zip(regions.tolist(), labels.tolist()):
        votes.setdefault(rid, {}).setdefault(lab, 0)
        votes[rid][lab] += 1
    voted = {}
    for rid, counts in votes.items():
        if len(counts) > 1:
            warnings.warn(
                f"region {rid} is crossed by strokes of labels "
                f"{sorted(counts)}; taking the majority",
                AmbiguousLabelWarning,
                stacklevel=3,
            )
        best = max(counts.items(), key=lambda kv: (kv[1], -kv[0]))
        voted[rid] = best[0]
    return voted


def build_model_arg(
    image: RasterImage, partition: RegionPartition, strokes: StrokeSet
) -> tuple[ARG, Rect]:
    """Model graph from the regions hit by strokes, plus the stroke rect.

    The rect is the bounding box of the rasterized stroke pixels (brush
    dilation included).  Vertices carry the majority stroke label.
    """
    label_raster = rasterize_strokes(strokes, image.width, image.height)
    hit = label_raster >= 0
    if not hit.any():
        raise EmptyModelError("no stroke pixel lands on the image")
    ys, xs = np.nonzero(hit)
    rect = Rect(
        int(xs.min()),
        int(ys.min()),
        int(xs.max() - xs.min()) + 1,
        int(ys.max() - ys.min()) + 1,
    )
    voted = _vote_labels(label_raster, partition)
    means, centroids, counts = region_stats(image, partition)
    arg = ARG(d_max=rect.diagonal, attribute_arity=3)
    for rid in sorted(voted):
        arg.add_vertex(
            rid,
            tuple(means[rid]),
            (centroids[rid, 0] - rect.x, centroids[rid, 1] - rect.y),
            pixel_count=int(counts[rid]),
            label=voted[rid],
        )
    for a, b in sorted(region_adjacency(partition)):
        if a in voted and b in voted:
            arg.add_adjacency(a, b)
    return arg, rect


def _paint_result(
    partition: RegionPartition,
    model: ARG,
    assignment: LabelAssignment,
    params: MatchParams,
    rect: Rect,
    clip_to_rect: bool,
) -> SegmentationResult:
    lut = np.full(partition.region_count, UNLABELLED_ID, dtype=np.uint16)
    regions: dict[int, RegionMatch] = {}
    for rid, v_m in assignment.mapping.items():
        label = model.vertex(v_m).label
        lut[rid] = label
        regions[rid] = RegionMatch(v_m, label, assignment.costs[rid])
    if clip_to_rect:
        label_map = np.full(
            (partition.height, partition.width), UNLABELLED_ID, dtype=np.uint16
        )
        x0, y0, x1, y1 = rect.clip(partition.width, partition.height)
        label_map[y0:y1, x0:x1] = lut[partition.region_ids[y0:y1, x0:x1]]
    else:
        label_map = lut[partition.region_ids]
    return SegmentationResult(label_map, regions, params, rect)


def segment_partitioned(
    image: RasterImage,
    partition: RegionPartition,
    strokes: StrokeSet,
    params: MatchParams | None = None,
) -> SegmentationResult:
    """segment() on a precomputed partition (used for caching)."""
    params = params or MatchParams()
    model, rect = build_model_arg(image, partition, strokes)
    input_arg = build_input_arg(image, partition, rect)
    assignment = match_graphs(input_arg, model, params)
    return _paint_result(partition, model, assignment, params, rect, clip_to_rect=False)


def segment(
    image: RasterImage,
    strokes: StrokeSet,
    params: MatchParams | None = None,
    watershed_params: WatershedParams | None = None,
) -> SegmentationResult:
    """Oversegment, build both graphs, match, and paint region labels.

    Every region touching the stroke rect receives the label of its
    best-matching model vertex over all of its pixels; regions that do
    not touch the rect stay unlabelled.
    """
    partition = watershed(image, watershed_params)
    return segment_partitioned(image, partition, strokes, params)


def make_stamp(
    image: RasterImage,
    strokes: StrokeSet,
    params: MatchParams | None = None,
    watershed_params: WatershedParams | None = None,
    partition: RegionPartition | None = None,
) -> ModelPack:
    params = params or MatchParams()
    if partition is None:
        partition = watershed(image, watershed_params)
    model, rect = build_model_arg(image, partition, strokes)
    return ModelPack(model, rect, strokes.label_table(), params)


def apply_stamp(
    pack: ModelPack,
    image: RasterImage,
    placement: tuple[int, int],
    params: MatchParams | None = None,
    watershed_params: WatershedParams | None = None,
    partition: RegionPartition | None = None,
) -> SegmentationResult:
    """Re-segment another image inside the stamp rectangle.

    The model graph comes from the pack alone; only the input graph is
    rebuilt, restricted to the placed rect.  Pixels outside the rect are
    unlabelled.
    """
    rect = Rect(int(placement[0]), int(placement[1]), pack.rect.width, pack.rect.height)
    x0, y0, x1, y1 = rect.clip(image.width, image.height)
    if x1 <= x0 or y1 <= y0:
        raise InvalidPlacementError(
            f"placement {placement} puts the {pack.rect.width}x{pack.rect.height} "
            f"rect outside the {image.width}x{image.height} image"
        )
    if partition is None:
        partition = watershed(image, watershed_params)
    input_arg = build_input_arg(image, partition, rect)
    use_params = params or pack.params_default
    assignment = match_graphs(input_arg, pack.model_arg, use_params)
    return _paint_result(
        partition, pack.model_arg, assignment, use_params, rect, clip_to_rect=True
    )


def render_labels(
    result: SegmentationResult,
    label_table: dict[int, tuple[int, int, int]],
    image: RasterImage,
    overlay_opacity: float = 0.5,
) -> RasterImage:
    """Alpha-blend label colors over the image; unlabelled pixels pass through."""
    if not 0.0 <= overlay_opacity <= 1.0:
        raise ValueError(f"overlay_opacity must be within [0, 1], got {overlay_opacity}")
    present = np.unique(result.label_map)
    colors = np.zeros((65536, 3), dtype=np.float64)
    for label in present.tolist():
        if label == UNLABELLED_ID:
            continue
        if label not in label_table:
            raise ValueError(f"label {label} missing from the label table")
        colors[label] = label_table[label]
    labelled = result.label_map != UNLABELLED_ID
    out = image.array.astype(np.float64).copy()
    blend = (
        colors[result.label_map[labelled]] * overlay_opacity
        + out[labelled] * (1.0 - overlay_opacity)
    )
    out[labelled] = np.floor(blend + 0.5)
    return RasterImage(out.astype(np.uint8))


# -- serialization ----------------------------------------------------


def model_pack_to_dict(pack: ModelPack) -> dict:
    return {
        "version": pack.format_version,
        "rect": {
            "x": pack.rect.x,
            "y": pack.rect.y,
            "width": pack.rect.width,
            "height": pack.rect.height,
        },
        "d_max": pack.model_arg.d_max,
        "label_table": {str(k): list(v) for k, v in pack.label_table.items()},
        "vertices": [
            {
                "id": v.id,
                "mu": list(v.mu),
                "centroid": list(v.centroid),
                "pixel_count": v.pixel_count,
                "label": v.label,
            }
            for v in pack.model_arg.vertices.values()
        ],
        "edges": [
            {"from": e.from_id, "to": e.to_id, "nu": list(e.nu)}
            for e in pack.model_arg.edges
        ],
        "params_default": {
            "alpha": pack.params_default.alpha,
            "gamma_e": pack.params_default.gamma_e,
        },
    }


def model_pack_from_dict(data: dict) -> ModelPack:
    try:
        rect = Rect(
            int(data["rect"]["x"]),
            int(data["rect"]["y"]),
            int(data["rect"]["width"]),
            int(data["rect"]["height"]),
        )
        arg = ARG(d_max=float(data["d_max"]), attribute_arity=3)
        for v in data["vertices"]:
            arg.add_vertex(
                int(v["id"]),
                tuple(float(c) for c in v["mu"]),
                (float(v["centroid"][0]), float(v["centroid"][1])),
                pixel_count=int(v["pixel_count"]),
                label=None if v["label"] is None else int(v["label"]),
            )
        for e in data["edges"]:
            arg.add_edge(int(e["from"]), int(e["to"]), (float(e["nu"][0]), float(e["nu"][1])))
        label_table = {
            int(k): tuple(int(c) for c in v) for k, v in data["label_table"].items()
        }
        params = MatchParams(
            float(data["params_default"]["alpha"]),
            float(data["params_default"]["gamma_e"]),
        )
        version = int(data.get("version", MODEL_PACK_VERSION))
    except (KeyError, TypeError, IndexError) as exc:
        raise ValueError(f"malformed model pack: {exc}") from exc
    arg.validate()
    return ModelPack(arg, rect, label_table, params, version)


def save_model_pack(pack: ModelPack, path: str | Path) -> None:
    Path(path).write_text(json.dumps(model_pack_to_dict(pack), sort_keys=True))


def load_model_pack(path: str | Path) -> ModelPack:
    return model_pack_from_dict(json.loads(Path(path).read_text()))


def save_label_map(
    result: SegmentationResult,
    label_table: dict[int, tuple[int, int, int]],
    path: str | Path,
) -> None:
    """16-bit grayscale PNG of label ids plus a JSON sidecar of the table."""
    save_gray16_png(result.label_map, path)
    sidecar = Path(path).with_suffix(".json")
    sidecar.write_text(
        json.dumps(
            {
                "unlabelled_id": UNLABELLED_ID,
                "label_table": {str(k): list(v) for k, v in label_table.items()},
            },
            sort_keys=True,
        )
    )
