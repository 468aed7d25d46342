"""User stroke sets: labelled polylines and their rasterization.

Stroke file schema (JSON):

    {"version": 1,
     "brush_width": 3,
     "labels": [{"id": 0, "color": [r, g, b],
                 "polylines": [[[x, y], ...], ...]}, ...]}

The file carries one brush width for every label.  In memory each layer
keeps its own width so programmatic callers may vary it; saving requires
the widths to agree.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

STROKE_FORMAT_VERSION = 1

# 65535 is reserved for unlabelled pixels in exported label maps.
MAX_LABEL_ID = 65534
UNLABELLED_ID = 65535

Point = tuple[float, float]


@dataclass
class StrokeLayer:
    label_id: int
    color: tuple[int, int, int]
    polylines: list[list[Point]] = field(default_factory=list)
    brush_width: int = 3


@dataclass
class StrokeSet:
    layers: list[StrokeLayer] = field(default_factory=list)

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        ids = [layer.label_id for layer in self.layers]
        if len(set(ids)) != len(ids):
            raise ValueError(f"label ids must be unique, got {ids}")
        colors = [tuple(layer.color) for layer in self.layers]
        if len(set(colors)) != len(colors):
            raise ValueError("label colors must be unique")
        for layer in self.layers:
            if not 0 <= layer.label_id <= MAX_LABEL_ID:
                raise ValueError(
                    f"label id {layer.label_id} outside [0, {MAX_LABEL_ID}]"
                )
            if layer.brush_width < 1:
                raise ValueError(f"brush_width must be >= 1, got {layer.brush_width}")
            for line in layer.polylines:
                if len(line) < 1:
                    raise ValueError("every polyline needs at least one point")

    def label_table(self) -> dict[int, tuple[int, int, int]]:
        return {layer.label_id: tuple(layer.color) for layer in self.layers}


def stroke_set_to_dict(strokes: StrokeSet) -> dict:
    widths = {layer.brush_width for layer in strokes.layers}
    if len(widths) > 1:
        raise ValueError(
            f"stroke files carry a single brush width, got {sorted(widths)}"
        )
    return {
        "version": STROKE_FORMAT_VERSION,
        "brush_width": widths.pop() if widths else 3,
        "labels": [
            {
                "id": layer.label_id,
                "color": list(layer.color),
                "polylines": [[[x, y] for x, y in line] for line in layer.polylines],
            }
            for layer in strokes.layers
        ],
    }


def stroke_set_from_dict(data: dict) -> StrokeSet:
    if not isinstance(data, dict) or "labels" not in data:
        raise ValueError("stroke JSON must be an object with a 'labels' list")
    width = int(data.get("brush_width", 3))
    layers = []
    for entry in data["labels"]:
        layers.append(
            StrokeLayer(
                label_id=int(entry["id"]),
                color=tuple(int(c) for c in entry["color"]),
                polylines=[
                    [(float(p[0]), float(p[1])) for p in line]
                    for line in entry["polylines"]
                ],
                brush_width=width,
            )
        )
    return StrokeSet(layers)


def save_strokes(strokes: StrokeSet, path: str | Path) -> None:
    Path(path).write_text(json.dumps(stroke_set_to_dict(strokes), sort_keys=True))


def load_strokes(path: str | Path) -> StrokeSet:
    return stroke_set_from_dict(json.loads(Path(path).read_text()))


def _disc_offsets(brush_width: int) -> list[tuple[int, int]]:
    radius = brush_width / 2.0
    reach = int(math.floor(radius))
    r2 = radius * radius
    return [
        (dx, dy)
        for dy in range(-reach, reach + 1)
        for dx in range(-reach, reach + 1)
        if dx * dx + dy * dy <= r2
    ]


def _bresenham(x0: int, y0: int, x1: int, y1: int) -> list[tuple[int, int]]:
    points = []
    dx = abs(x1 - x0)
    dy = -abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx + dy
    x, y = x0, y0
    while True:
        points.append((x, y))
        if x == x1 and y == y1:
            return points
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x += sx
        if e2 <= dx:
            err += dx
            y += sy


def _round(v: float) -> int:
    return int(math.floor(v + 0.5))


def rasterize_strokes(strokes: StrokeSet, width: int, height: int) -> np.ndarray:
    """Paint the strokes into an (H, W) int32 grid of label ids, -1 where
    nothing was drawn.  Points are clamped into the image; each polyline
    is traced with Bresenham segments dilated by a disc of radius
    brush_width / 2.  Later layers overwrite earlier ones.
    """
    out = np.full((height, width), -1, dtype=np.int32)
    for layer in strokes.layers:
        offsets = _disc_offsets(layer.brush_width)
        for line in layer.polylines:
            clamped = [
                (
                    min(max(_round(x), 0), width - 1),
                    min(max(_round(y), 0), height - 1),
                )
                for x, y in line
            ]
            trace: list[tuple[int, int]] = []
            if len(clamped) == 1:
                trace = clamped
            else:
                for (x0, y0), (x1, y1) in zip(clamped, clamped[1:]):
                    trace.extend(_bresenham(x0, y0, x1, y1))
            for cx, cy in trace:
                for dx, dy in offsets:
                    px, py = cx + dx, cy + dy
                    if 0 <= px < width and 0 <= py < height:
                        out[py, px] = layer.label_id
    return out
