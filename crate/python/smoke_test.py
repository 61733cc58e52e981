#!/usr/bin/env python3
"""Smoke test for the saldet_py extension module.

Builds are picked up straight from the cargo target directory; run
`cargo build -p saldet-python` (or --release) first, then:

    python3 python/smoke_test.py
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def import_saldet_py():
    candidates = [
        REPO / "target" / "release" / "libsaldet_py.so",
        REPO / "target" / "debug" / "libsaldet_py.so",
    ]
    built = next((p for p in candidates if p.is_file()), None)
    if built is None:
        sys.exit("libsaldet_py.so not found; run `cargo build -p saldet-python` first")
    stage = Path(tempfile.mkdtemp(prefix="saldet-py-"))
    shutil.copy2(built, stage / "saldet_py.so")
    sys.path.insert(0, str(stage))
    import saldet_py

    return saldet_py


def main():
    sp = import_saldet_py()
    work = Path(tempfile.mkdtemp(prefix="saldet-smoke-"))

    # Synthetic data round-trip.
    sp.generate_synthetic(str(work / "data"), 2, seed=7, width=96, height=72)
    img_path = work / "data" / "img" / "0000.png"
    gt_path = work / "data" / "gt" / "0000.png"
    assert img_path.is_file() and gt_path.is_file()

    image = sp.load_image(str(img_path))
    assert (image.width, image.height) == (96, 72), repr(image)

    # Detection with custom config.
    config = sp.PipelineConfig(superpixel_count=80)
    assert config.superpixel_count == 80
    assert config.proposal_count == 1000  # untouched kwarg keeps its default
    result = sp.detect(image, config)
    assert (result.width, result.height) == (96, 72)
    values = result.saliency
    assert len(values) == 96 * 72
    assert all(0.0 <= v <= 1.0 for v in values)
    assert max(values) == 1.0, "rescaled map should top out at 1"
    assert len(result.objectness) == len(values)
    assert result.margin is not None and len(result.margin) == 4
    cx, cy = result.centroid
    assert 0 <= cx < 96 and 0 <= cy < 72
    timings = result.stage_timings
    assert "objectness" in timings and "compactness" in timings
    assert result.total_ms > 0

    # Determinism.
    again = sp.detect(image, config)
    assert again.saliency == values

    # Binary masks and the u8 domain check.
    mask = result.binary_mask(0)
    assert all(mask) and len(mask) == len(values)
    try:
        result.binary_mask(256)
    except OverflowError:
        pass
    else:
        raise AssertionError("threshold 256 must raise OverflowError")

    # Saving and scoring.
    out_png = work / "saliency.png"
    result.save_png(str(out_png))
    scores = sp.eval_pair(str(out_png), str(gt_path))
    assert set(scores) == {"mae", "adaptive_threshold", "precision", "recall", "f_beta"}
    assert 0.0 <= scores["mae"] <= 1.0
    assert scores["f_beta"] > 0.5, scores

    # Metric helpers.
    assert math.isclose(sp.f_measure(0.8, 0.4), 0.65, abs_tol=1e-12)
    assert sp.f_measure(0.0, 0.0) == 0.0
    for p in (0.1, 0.5, 0.9):
        assert math.isclose(sp.f_measure(p, p), p, abs_tol=1e-12)
    assert math.isclose(sp.BETA_SQUARED, 0.3)

    # Missing files surface as OSError, not a crash.
    try:
        sp.load_image(str(work / "nope.png"))
    except OSError:
        pass
    else:
        raise AssertionError("missing image must raise OSError")

    print("smoke test passed:", scores)


if __name__ == "__main__":
    main()
