"""Batch command line front end.

Subcommands: overseg, segment, stamp, apply.  Exit codes: 0 on success,
2 on usage errors (argparse), 1 on pipeline failures.  Diagnostics go to
stderr as single greppable lines; outputs are deterministic for fixed
inputs.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import pipeline
from .image import load_png, save_png
from .matching import MatchParams
from .strokes import load_strokes
from .watershed import WatershedParams, save_partition, watershed


def _unit_interval(name):
    def parse(text: str) -> float:
        try:
            value = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a number, got {text!r}")
        if not 0.0 <= value <= 1.0:
            raise argparse.ArgumentTypeError(f"{name} must be within [0, 1], got {value}")
        return value

    return parse


def _radius(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"smoothing-radius must be an integer, got {text!r}")
    if not 0 <= value <= 8:
        raise argparse.ArgumentTypeError(f"smoothing-radius must be within [0, 8], got {value}")
    return value


def _point(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"at must be 'x,y', got {text!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"at must be integer 'x,y', got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="argseg",
        description="Model-based interactive image segmentation over region graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_match_flags(p):
        p.add_argument("--alpha", type=_unit_interval("alpha"), default=0.5,
                       help="appearance vs structure weight (default 0.5)")
        p.add_argument("--gamma", type=_unit_interval("gamma"), default=0.5,
                       help="angular vs modulus edge weight (default 0.5)")

    def add_smoothing(p):
        p.add_argument("--smoothing-radius", type=_radius, default=1,
                       help="box pre-blur radius for the watershed (default 1)")

    p = sub.add_parser("overseg", help="watershed partition of an image")
    p.add_argument("--image", required=True)
    p.add_argument("--out", required=True, help="16-bit region-id PNG (+ JSON sidecar)")
    add_smoothing(p)

    p = sub.add_parser("segment", help="segment an image from a stroke file")
    p.add_argument("--image", required=True)
    p.add_argument("--strokes", required=True)
    add_match_flags(p)
    add_smoothing(p)
    p.add_argument("--out", required=True, help="16-bit label-id PNG (+ JSON sidecar)")
    p.add_argument("--overlay", help="optional blended overlay PNG")
    p.add_argument("--overlay-opacity", type=_unit_interval("overlay-opacity"), default=0.5)
    p.add_argument("--stamp-out", help="also write the model pack JSON here")

    p = sub.add_parser("stamp", help="build a reusable model pack from strokes")
    p.add_argument("--image", required=True)
    p.add_argument("--strokes", required=True)
    add_match_flags(p)
    add_smoothing(p)
    p.add_argument("--out", required=True, help="model pack JSON")

    p = sub.add_parser("apply", help="apply a saved stamp to an image")
    p.add_argument("--model", required=True)
    p.add_argument("--image", required=True)
    p.add_argument("--at", required=True, type=_point, help="placement 'x,y'")
    p.add_argument("--alpha", type=_unit_interval("alpha"), default=None,
                   help="override the pack default")
    p.add_argument("--gamma", type=_unit_interval("gamma"), default=None,
                   help="override the pack default")
    add_smoothing(p)
    p.add_argument("--out", required=True)
    p.add_argument("--overlay")
    p.add_argument("--overlay-opacity", type=_unit_interval("overlay-opacity"), default=0.5)
    return parser


def _run(args) -> int:
    wp = WatershedParams(smoothing_radius=args.smoothing_radius)
    if args.command == "overseg":
        partition = watershed(load_png(args.image), wp)
        save_partition(partition, args.out)
        return 0

    if args.command == "segment":
        image = load_png(args.image)
        strokes = load_strokes(args.strokes)
        params = MatchParams(args.alpha, args.gamma)
        partition = watershed(image, wp)
        result = pipeline.segment_partitioned(image, partition, strokes, params)
        pipeline.save_label_map(result, strokes.label_table(), args.out)
        if args.overlay:
            overlay = pipeline.render_labels(
                result, strokes.label_table(), image, args.overlay_opacity
            )
            save_png(overlay, args.overlay)
        if args.stamp_out:
            pack = pipeline.make_stamp(image, strokes, params, partition=partition)
            pipeline.save_model_pack(pack, args.stamp_out)
        return 0

    if args.command == "stamp":
        image = load_png(args.image)
        strokes = load_strokes(args.strokes)
        pack = pipeline.make_stamp(image, strokes, MatchParams(args.alpha, args.gamma),
                                   watershed_params=wp)
        pipeline.save_model_pack(pack, args.out)
        return 0

    if args.command == "apply":
        pack = pipeline.load_model_pack(args.model)
        image = load_png(args.image)
        params = None
        if args.alpha is not None or args.gamma is not None:
            params = MatchParams(
                pack.params_default.alpha if args.alpha is None else args.alpha,
                pack.params_default.gamma_e if args.gamma is None else args.gamma,
            )
        result = pipeline.apply_stamp(pack, image, args.at, params, watershed_params=wp)
        pipeline.save_label_map(result, pack.label_table, args.out)
        if args.overlay:
            overlay = pipeline.render_labels(
                result, pack.label_table, image, args.overlay_opacity
            )
            save_png(overlay, args.overlay)
        return 0

    raise AssertionError(f"unhandled command {args.command}")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        code = _run(args)
    except pipeline.InvalidPlacementError as exc:
        print(f"argseg: error: invalid-placement: {exc}", file=sys.stderr)
        return 1
    except pipeline.EmptyModelError as exc:
        print(f"argseg: error: empty-model: {exc}", file=sys.stderr)
        return 1
    except pipeline.EmptyInputError as exc:
        print(f"argseg: error: empty-input: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"argseg: error: missing-file: {exc.filename}", file=sys.stderr)
        return 1
    except (ValueError, KeyError) as exc:
        print(f"argseg: error: invalid-input: {exc}", file=sys.stderr)
        return 1
    elapsed = (time.perf_counter() - start) * 1000.0
    print(f"argseg: {args.command} finished in {elapsed:.1f} ms", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
