"""argseg: interactive model-based image segmentation.

Draw colored strokes over an image to define an object model, watershed
the image into small regions, build attributed relational graphs for
the input and the model, and label every region with the model vertex
whose local deformation is cheapest.  Models serialize to "stamps" that
can be re-applied to similar images.
"""

from .graph import ARG, Edge, Vertex, relational_attribute
from .image import RasterImage, load_png, save_png
from .matching import (
    LabelAssignment,
    MatchParams,
    assignment_cost,
    deform_vertex,
    edge_cost,
    match_graphs,
    vertex_cost,
)
from .pipeline import (
    AmbiguousLabelWarning,
    EmptyInputError,
    EmptyModelError,
    InvalidPlacementError,
    ModelPack,
    Rect,
    RegionMatch,
    SegmentationResult,
    apply_stamp,
    build_input_arg,
    build_model_arg,
    load_model_pack,
    make_stamp,
    model_pack_from_dict,
    model_pack_to_dict,
    render_labels,
    save_label_map,
    save_model_pack,
    segment,
    segment_partitioned,
)
from .strokes import (
    MAX_LABEL_ID,
    UNLABELLED_ID,
    StrokeLayer,
    StrokeSet,
    load_strokes,
    rasterize_strokes,
    save_strokes,
    stroke_set_from_dict,
    stroke_set_to_dict,
)
from .watershed import (
    RegionPartition,
    WatershedParams,
    gradient_magnitude,
    load_partition,
    luminance,
    region_adjacency,
    region_stats,
    save_partition,
    watershed,
)

__version__ = "0.1.0"

__all__ = [
    "ARG",
    "AmbiguousLabelWarning",
    "Edge",
    "EmptyInputError",
    "EmptyModelError",
    "InvalidPlacementError",
    "LabelAssignment",
    "MAX_LABEL_ID",
    "MatchParams",
    "ModelPack",
    "RasterImage",
    "Rect",
    "RegionMatch",
    "RegionPartition",
    "SegmentationResult",
    "StrokeLayer",
    "StrokeSet",
    "UNLABELLED_ID",
    "Vertex",
    "WatershedParams",
    "apply_stamp",
    "assignment_cost",
    "build_input_arg",
    "build_model_arg",
    "deform_vertex",
    "edge_cost",
    "gradient_magnitude",
    "load_model_pack",
    "load_partition",
    "load_png",
    "load_strokes",
    "luminance",
    "make_stamp",
    "match_graphs",
    "model_pack_from_dict",
    "model_pack_to_dict",
    "region_adjacency",
    "region_stats",
    "relational_attribute",
    "render_labels",
    "rasterize_strokes",
    "save_label_map",
    "save_model_pack",
    "save_partition",
    "save_png",
    "save_strokes",
    "segment",
    "segment_partitioned",
    "stroke_set_from_dict",
    "stroke_set_to_dict",
    "vertex_cost",
    "watershed",
]
