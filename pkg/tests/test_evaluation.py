import json
import math

import numpy as np
import pytest

from docsynth.models.raster import BinaryMask, RasterImage
from docsynth.services import raster_io
from docsynth.services.evaluation import EvaluationError, evaluate_corpus, render_table, write_report
from docsynth.services.metrics import PSEUDO_F_VARIANT, evaluate


@pytest.fixture
def corpus(tmp_path):
    """Five ground truths; four noisy predictions plus one perfect one."""
    rng = np.random.default_rng(31)
    pairs = {}
    for i, stem in enumerate(["p0", "p1", "p2", "p3", "p4"]):
        gt = rng.random((16, 16)) < 0.3
        pred = gt.copy() if i == 2 else gt ^ (rng.random((16, 16)) < 0.1)
        raster_io.save_mask(tmp_path / "gt" / f"{stem}.png", BinaryMask(gt))
        raster_io.save_mask(tmp_path / "pred" / f"{stem}.png", BinaryMask(pred))
        pairs[stem] = (BinaryMask(pred), BinaryMask(gt))
    return tmp_path, pairs


def test_means_over_stem_sorted_images(corpus):
    root, pairs = corpus
    report = evaluate_corpus(root / "pred", root / "gt", jobs=3)
    assert [i.stem for i in report.images] == sorted(pairs)
    expected = [evaluate(*pairs[s]) for s in sorted(pairs)]
    assert report.mean_f_score == pytest.approx(sum(e.f_score for e in expected) / 5)
    assert report.mean_pf_score == pytest.approx(sum(e.pf_score for e in expected) / 5)
    finite = [e.psnr for e in expected if not math.isinf(e.psnr)]
    assert len(finite) == 4
    assert report.psnr_infinite == 1
    assert report.mean_psnr == pytest.approx(sum(finite) / 4)
    assert report.mean_bce is None
    assert report.name == "pred"


def test_unmatched_stems_are_reported(corpus, caplog):
    root, _ = corpus
    raster_io.save_mask(root / "pred" / "extra.png", BinaryMask.empty(16, 16))
    (root / "gt" / "p4.png").unlink()
    report = evaluate_corpus(root / "pred", root / "gt")
    assert len(report.images) == 4
    assert report.unmatched_pred == ["extra", "p4"]
    assert report.unmatched_gt == []
    assert "have no ground truth" in caplog.text


def test_disjoint_directories(tmp_path):
    raster_io.save_mask(tmp_path / "pred" / "a.png", BinaryMask.empty(4, 4))
    raster_io.save_mask(tmp_path / "gt" / "b.png", BinaryMask.empty(4, 4))
    with pytest.raises(EvaluationError, match="no common file stems"):
        evaluate_corpus(tmp_path / "pred", tmp_path / "gt")


def test_missing_directory(tmp_path):
    with pytest.raises(EvaluationError):
        evaluate_corpus(tmp_path / "nope", tmp_path)


def test_probability_maps_give_bce(corpus):
    root, pairs = corpus
    for stem, (_, gt) in pairs.items():
        raster_io.save_image(root / "prob" / f"{stem}.png", RasterImage(np.where(gt.data, 1.0, 0.0)))
    report = evaluate_corpus(root / "pred", root / "gt", prob_dir=root / "prob")
    assert report.mean_bce == pytest.approx(-math.log(1 - 1e-7))


def test_missing_probability_map(corpus):
    root, pairs = corpus
    raster_io.save_image(root / "prob" / "p0.png", RasterImage(np.zeros((16, 16))))
    with pytest.raises(EvaluationError, match="p1"):
        evaluate_corpus(root / "pred", root / "gt", prob_dir=root / "prob")


def test_report_files(corpus):
    root, _ = corpus
    report = evaluate_corpus(root / "pred", root / "gt", name="otsu")
    text_path, jsonl_path = write_report(root / "reports" / "otsu.txt", report)
    assert text_path.name == "otsu.txt" and jsonl_path.name == "otsu.jsonl"

    lines = text_path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == f"# {PSEUDO_F_VARIANT}"
    assert lines[1] == "# otsu: 5 images, 1 infinite PSNR excluded from mean"
    assert lines[2].split() == ["Metric", "otsu"]
    assert [line.split()[0] for line in lines[3:]] == ["F-score", "PF-score", "PSNR"]
    assert lines[3].split()[1] == f"{report.mean_f_score:.4f}"

    rows = [json.loads(line) for line in jsonl_path.read_text(encoding="utf-8").splitlines()]
    assert [r["stem"] for r in rows] == ["p0", "p1", "p2", "p3", "p4"]
    assert rows[2]["psnr"] == "inf"


def test_table_columns_per_prediction_set(corpus):
    root, _ = corpus
    first = evaluate_corpus(root / "pred", root / "gt", name="a")
    second = evaluate_corpus(root / "gt", root / "gt", name="perfect")
    table = render_table([first, second]).splitlines()
    assert table[3].split() == ["Metric", "a", "perfect"]
    assert table[-1].split() == ["PSNR", f"{first.mean_psnr:.2f}", "n/a"]
