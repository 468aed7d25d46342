import json

import numpy as np
import pytest

from argseg import MatchParams, WatershedParams, save_png, save_strokes, segment
from argseg.cli import main

from .fixtures import two_tone_setup


@pytest.fixture
def workspace(tmp_path):
    img, truth, strokes = two_tone_setup()
    image_path = tmp_path / "input.png"
    strokes_path = tmp_path / "strokes.json"
    save_png(img, image_path)
    save_strokes(strokes, strokes_path)
    return tmp_path, image_path, strokes_path, img, truth, strokes


def test_overseg_writes_partition(workspace):
    tmp, image_path, *_ = workspace
    out = tmp / "part.png"
    assert main(["overseg", "--image", str(image_path), "--out", str(out)]) == 0
    assert out.exists()
    sidecar = json.loads((tmp / "part.json").read_text())
    assert sidecar["region_count"] >= 1


def test_segment_matches_library_output(workspace):
    tmp, image_path, strokes_path, img, truth, strokes = workspace
    out = tmp / "labels.png"
    code = main([
        "segment", "--image", str(image_path), "--strokes", str(strokes_path),
        "--smoothing-radius", "0", "--out", str(out),
        "--overlay", str(tmp / "overlay.png"),
    ])
    assert code == 0
    from argseg.image import load_gray16_png

    got = load_gray16_png(out)
    expected = segment(img, strokes, MatchParams(0.5, 0.5),
                       WatershedParams(smoothing_radius=0)).label_map
    assert np.array_equal(got, expected)
    assert (tmp / "overlay.png").exists()
    # away from the watershed boundary the labels equal the tone map
    w = img.width
    interior = np.ones_like(truth, dtype=bool)
    interior[:, w // 2 - 1: w // 2 + 1] = False
    assert np.array_equal(got[interior], truth[interior])


def test_repeat_invocations_are_byte_identical(workspace):
    tmp, image_path, strokes_path, *_ = workspace
    argv_base = [
        "segment", "--image", str(image_path), "--strokes", str(strokes_path),
        "--out", "", "--overlay", "", "--stamp-out", "",
    ]
    blobs = []
    for tag in ("a", "b"):
        argv = list(argv_base)
        argv[argv.index("--out") + 1] = str(tmp / f"labels_{tag}.png")
        argv[argv.index("--overlay") + 1] = str(tmp / f"overlay_{tag}.png")
        argv[argv.index("--stamp-out") + 1] = str(tmp / f"pack_{tag}.json")
        assert main(argv) == 0
        blobs.append((
            (tmp / f"labels_{tag}.png").read_bytes(),
            (tmp / f"labels_{tag}.json").read_bytes(),
            (tmp / f"overlay_{tag}.png").read_bytes(),
            (tmp / f"pack_{tag}.json").read_bytes(),
        ))
    assert blobs[0] == blobs[1]


def test_stamp_then_apply_round_trip(workspace):
    tmp, image_path, strokes_path, img, _, strokes = workspace
    pack_path = tmp / "pack.json"
    assert main([
        "stamp", "--image", str(image_path), "--strokes", str(strokes_path),
        "--smoothing-radius", "0", "--out", str(pack_path),
    ]) == 0
    pack = json.loads(pack_path.read_text())
    out = tmp / "applied.png"
    code = main([
        "apply", "--model", str(pack_path), "--image", str(image_path),
        "--at", f"{pack['rect']['x']},{pack['rect']['y']}",
        "--smoothing-radius", "0", "--out", str(out),
    ])
    assert code == 0
    assert out.exists()


def test_alpha_out_of_range_is_usage_error(workspace, capsys):
    _, image_path, strokes_path, *_ = workspace
    with pytest.raises(SystemExit) as exc:
        main([
            "segment", "--image", str(image_path), "--strokes", str(strokes_path),
            "--alpha", "1.5", "--out", "x.png",
        ])
    assert exc.value.code == 2
    assert "alpha" in capsys.readouterr().err


def test_apply_outside_image_is_pipeline_error(workspace, capsys):
    tmp, image_path, strokes_path, *_ = workspace
    pack_path = tmp / "pack.json"
    main(["stamp", "--image", str(image_path), "--strokes", str(strokes_path),
          "--out", str(pack_path)])
    code = main([
        "apply", "--model", str(pack_path), "--image", str(image_path),
        "--at", "500,500", "--out", str(tmp / "applied.png"),
    ])
    assert code == 1
    assert "invalid-placement" in capsys.readouterr().err


def test_missing_file_is_pipeline_error(tmp_path, capsys):
    code = main(["overseg", "--image", str(tmp_path / "nope.png"),
                 "--out", str(tmp_path / "out.png")])
    assert code == 1
    assert "missing-file" in capsys.readouterr().err


def test_malformed_strokes_json(workspace, capsys):
    tmp, image_path, *_ = workspace
    bad = tmp / "bad.json"
    bad.write_text("{not json")
    code = main([
        "segment", "--image", str(image_path), "--strokes", str(bad),
        "--out", str(tmp / "labels.png"),
    ])
    assert code == 1
    assert "invalid-input" in capsys.readouterr().err
