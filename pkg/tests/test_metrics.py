import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import ndimage

from docsynth.models.errors import DimensionMismatchError
from docsynth.models.metric_report import ConfusionCounts, MetricReport, ProbabilityMap
from docsynth.models.raster import BinaryMask
from docsynth.services.metrics import bce, confusion, evaluate, f_score, pf_score, psnr, skeletonize

EIGHT = np.ones((3, 3), dtype=bool)


def bar() -> BinaryMask:
    data = np.zeros((5, 12), dtype=bool)
    data[1:4, 1:11] = True
    return BinaryMask(data)


def brute_scores(pred: np.ndarray, gt: np.ndarray) -> tuple[float, float]:
    tp = fp = fn = diff = 0
    for p, g in zip(pred.ravel().tolist(), gt.ravel().tolist()):
        tp += p and g
        fp += p and not g
        fn += g and not p
        diff += p != g
    prec = tp / (tp + fp) if tp + fp else 0.0
    rec = tp / (tp + fn) if tp + fn else 0.0
    f = 2 * prec * rec / (prec + rec) if prec + rec else 0.0
    peak = math.inf if diff == 0 else 10 * math.log10(pred.size / diff)
    return f, peak


def brute_zhang_suen(data: np.ndarray) -> np.ndarray:
    """Pixel-loop Zhang-Suen with the vanished-component guard."""
    img = np.pad(data.astype(int), 1)
    h, w = img.shape

    def step(first: bool) -> bool:
        doomed = []
        for y in range(1, h - 1):
            for x in range(1, w - 1):
                if not img[y, x]:
                    continue
                n = [img[y - 1, x], img[y - 1, x + 1], img[y, x + 1], img[y + 1, x + 1],
                     img[y + 1, x], img[y + 1, x - 1], img[y, x - 1], img[y - 1, x - 1]]
                count = sum(n)
                flips = sum(n[i] == 0 and n[(i + 1) % 8] == 1 for i in range(8))
                p2, p4, p6, p8 = n[0], n[2], n[4], n[6]
                if first:
                    side = p2 * p4 * p6 == 0 and p4 * p6 * p8 == 0
                else:
                    side = p2 * p4 * p8 == 0 and p2 * p6 * p8 == 0
                if 2 <= count <= 6 and flips == 1 and side:
                    doomed.append((y, x))
        for y, x in doomed:
            img[y, x] = 0
        return bool(doomed)

    while step(True) | step(False):
        pass
    thin = img[1:-1, 1:-1].astype(bool)
    labels, n = ndimage.label(data, structure=EIGHT)
    for label in range(1, n + 1):
        if not (thin & (labels == label)).any():
            ys, xs = np.nonzero(labels == label)
            thin[ys[0], xs[0]] = True
    return thin


def brute_pf(pred: np.ndarray, gt: np.ndarray) -> float:
    """Precision against the whole ground truth, recall against its skeleton."""
    skeleton = brute_zhang_suen(gt)
    tp = fp = hit = skel = 0
    for y in range(gt.shape[0]):
        for x in range(gt.shape[1]):
            p, g, s = bool(pred[y, x]), bool(gt[y, x]), bool(skeleton[y, x])
            tp += p and g
            fp += p and not g
            hit += p and s
            skel += s
    prec = tp / (tp + fp) if tp + fp else 0.0
    rec = hit / skel if skel else 0.0
    return 2 * prec * rec / (prec + rec) if prec + rec else 0.0


def brute_bce(prob: np.ndarray, gt: np.ndarray) -> float:
    total = 0.0
    for p, g in zip(prob.ravel().tolist(), gt.ravel().tolist()):
        p = min(max(p, 1e-7), 1 - 1e-7)
        total += -math.log(p) if g else -math.log(1 - p)
    return total / prob.size


class TestCounts:
    def test_confusion(self):
        pred = BinaryMask(np.array([[1, 1, 0, 0]], dtype=bool))
        gt = BinaryMask(np.array([[1, 0, 1, 0]], dtype=bool))
        assert confusion(pred, gt) == ConfusionCounts(tp=1, fp=1, fn=1, tn=1)

    def test_zero_over_zero_is_zero(self):
        empty = BinaryMask.empty(4, 4)
        assert f_score(confusion(empty, empty)) == 0.0
        assert pf_score(empty, empty) == 0.0

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            confusion(BinaryMask.empty(2, 2), BinaryMask.empty(2, 3))

    def test_random_pairs_match_brute_force(self):
        rng = np.random.default_rng(17)
        for _ in range(200):
            pred, gt = rng.random((8, 8)) < 0.4, rng.random((8, 8)) < 0.4
            prob = rng.random((8, 8))
            prob[rng.random((8, 8)) < 0.1] = 0.0
            prob[rng.random((8, 8)) < 0.1] = 1.0
            f, peak = brute_scores(pred, gt)
            assert f_score(confusion(BinaryMask(pred), BinaryMask(gt))) == f
            assert pf_score(BinaryMask(pred), BinaryMask(gt)) == brute_pf(pred, gt)
            assert psnr(BinaryMask(pred), BinaryMask(gt)) == pytest.approx(peak, abs=1e-9)
            assert bce(ProbabilityMap(prob), BinaryMask(gt)) == pytest.approx(brute_bce(prob, gt), abs=1e-9)


class TestPsnr:
    def test_one_percent_error_is_20_db(self):
        gt = np.zeros((10, 10), dtype=bool)
        pred = gt.copy()
        pred[3, 3] = True
        assert psnr(BinaryMask(pred), BinaryMask(gt)) == pytest.approx(20.0)

    def test_identical_is_infinite(self):
        mask = BinaryMask(np.eye(4, dtype=bool))
        assert psnr(mask, mask) == math.inf


class TestBce:
    def test_half_probability_is_ln2(self):
        gt = BinaryMask(np.eye(4, dtype=bool))
        assert bce(ProbabilityMap(np.full((4, 4), 0.5)), gt) == pytest.approx(math.log(2))

    def test_mixed_confidences(self):
        gt = BinaryMask(np.array([[True, False]]))
        assert bce(ProbabilityMap(np.array([[0.8, 0.1]])), gt) == pytest.approx(0.1643, abs=1e-4)

    def test_certain_mistake_is_finite(self):
        gt = BinaryMask(np.array([[True]]))
        assert bce(ProbabilityMap(np.array([[0.0]])), gt) == pytest.approx(-math.log(1e-7))

    def test_probability_range(self):
        with pytest.raises(ValueError):
            ProbabilityMap(np.array([[1.2]]))


class TestSkeleton:
    def test_bar_thins_to_its_centre_line(self):
        expected = np.zeros((5, 12), dtype=bool)
        expected[2, 2:9] = True
        assert np.array_equal(skeletonize(bar()).data, expected)

    def test_empty(self):
        assert skeletonize(BinaryMask.empty(3, 3)).is_empty()

    def test_two_by_two_block_keeps_one_pixel(self):
        data = np.zeros((4, 4), dtype=bool)
        data[1:3, 1:3] = True
        thin = skeletonize(BinaryMask(data)).data
        assert thin.sum() == 1
        assert thin[1, 1]

    def test_random_masks_match_pixel_loop(self):
        rng = np.random.default_rng(23)
        for _ in range(100):
            data = ndimage.binary_dilation(rng.random((12, 12)) < 0.15, iterations=1)
            thin = skeletonize(BinaryMask(data))
            assert np.array_equal(thin.data, brute_zhang_suen(data))
            assert not (thin.data & ~data).any()
            assert skeletonize(thin).equals(thin)
            assert ndimage.label(thin.data, structure=EIGHT)[1] >= ndimage.label(data, structure=EIGHT)[1]

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.floats(0.1, 0.7))
    def test_idempotent_and_contained(self, seed, density):
        data = np.random.default_rng(seed).random((10, 10)) < density
        thin = skeletonize(BinaryMask(data))
        assert not (thin.data & ~data).any()
        assert skeletonize(thin).equals(thin)


class TestPseudoF:
    def test_perfect_prediction(self):
        assert pf_score(bar(), bar()) == pytest.approx(1.0)

    def test_half_bar(self):
        pred = np.zeros((5, 12), dtype=bool)
        pred[1:4, 1:6] = True
        # precision 1, skeleton pixels covered 4 of 7
        assert pf_score(BinaryMask(pred), bar()) == pytest.approx(8 / 11)
        assert f_score(confusion(BinaryMask(pred), bar())) == pytest.approx(2 / 3)

    def test_skeleton_only_prediction_scores_higher_than_f(self):
        skeleton = skeletonize(bar())
        assert pf_score(skeleton, bar()) > f_score(confusion(skeleton, bar()))


def test_evaluate_bundles_all_scores():
    gt = bar()
    report = evaluate(gt, gt, ProbabilityMap(np.where(gt.data, 0.9, 0.1)))
    assert isinstance(report, MetricReport)
    assert report.f_score == pytest.approx(1.0)
    assert report.pf_score == pytest.approx(1.0)
    assert report.psnr == math.inf
    assert report.bce == pytest.approx(-math.log(0.9))
    assert report.to_dict()["psnr"] == "inf"
    assert evaluate(gt, gt).bce is None
