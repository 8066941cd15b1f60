"""DIBCO-style binarization scores.

Foreground (ink) is the positive class. Every 0/0 ratio evaluates to 0.
The pseudo-F implemented here takes recall against the Zhang-Suen skeleton
of the ground truth and precision against the full ground truth; it is not
the distance-weighted variant of the official contest tool.
"""

import math

import numpy as np
from scipy import ndimage

from docsynth.models.errors import DimensionMismatchError
from docsynth.models.metric_report import ConfusionCounts, MetricReport, ProbabilityMap
from docsynth.models.raster import BinaryMask

PSEUDO_F_VARIANT = "pseudo-F: recall vs Zhang-Suen skeleton of GT, precision vs full GT"
BCE_EPSILON = 1e-7

_EIGHT_CONNECTED = np.ones((3, 3), dtype=bool)


def _same_shape(a_shape: tuple[int, int], b_shape: tuple[int, int]) -> None:
    if a_shape != b_shape:
        raise DimensionMismatchError(f"prediction {a_shape} and ground truth {b_shape} differ in size")


def _ratio(num: float, den: float) -> float:
    return num / den if den else 0.0


def _harmonic(p: float, r: float) -> float:
    return _ratio(2.0 * p * r, p + r)


def confusion(pred: BinaryMask, gt: BinaryMask) -> ConfusionCounts:
    _same_shape(pred.shape, gt.shape)
    p, g = pred.data, gt.data
    tp = int(np.count_nonzero(p & g))
    fp = int(np.count_nonzero(p & ~g))
    fn = int(np.count_nonzero(~p & g))
    return ConfusionCounts(tp=tp, fp=fp, fn=fn, tn=p.size - tp - fp - fn)


def precision(c: ConfusionCounts) -> float:
    return _ratio(c.tp, c.tp + c.fp)


def recall(c: ConfusionCounts) -> float:
    return _ratio(c.tp, c.tp + c.fn)


def f_score(c: ConfusionCounts) -> float:
    return _harmonic(precision(c), recall(c))


# -- Zhang-Suen thinning ------------------------------------------------------


def _neighbours(img: np.ndarray) -> list[np.ndarray]:
    """P2..P9 clockwise from north, for a zero-padded uint8 image."""
    return [
        img[:-2, 1:-1],   # P2 north
        img[:-2, 2:],     # P3 north-east
        img[1:-1, 2:],    # P4 east
        img[2:, 2:],      # P5 south-east
        img[2:, 1:-1],    # P6 south
        img[2:, :-2],     # P7 south-west
        img[1:-1, :-2],   # P8 west
        img[:-2, :-2],    # P9 north-west
    ]


def _thinning_pass(img: np.ndarray, first: bool) -> bool:
    """One subiteration in place on the padded image; returns whether anything was removed."""
    p2, p3, p4, p5, p6, p7, p8, p9 = _neighbours(img)
    ring = (p2, p3, p4, p5, p6, p7, p8, p9, p2)
    count = p2 + p3 + p4 + p5 + p6 + p7 + p8 + p9
    transitions = sum(((ring[i] == 0) & (ring[i + 1] == 1)).astype(np.uint8) for i in range(8))
    if first:
        side = (p2 * p4 * p6 == 0) & (p4 * p6 * p8 == 0)
    else:
        side = (p2 * p4 * p8 == 0) & (p2 * p6 * p8 == 0)
    centre = img[1:-1, 1:-1]
    remove = (centre == 1) & (count >= 2) & (count <= 6) & (transitions == 1) & side
    if not remove.any():
        return False
    centre[remove] = 0
    return True


def skeletonize(mask: BinaryMask) -> BinaryMask:
    """Zhang-Suen thinning to a fixpoint.

    Zhang-Suen erases 2x2 blocks and 2-pixel-thick diagonals outright; any
    8-connected component that vanishes gets its first row-major pixel back,
    so the component count is kept and the result is still a fixpoint.
    """
    if mask.is_empty():
        return mask
    img = np.pad(mask.data.astype(np.uint8), 1)
    while True:
        changed = _thinning_pass(img, first=True)
        changed = _thinning_pass(img, first=False) or changed
        if not changed:
            break
    thin = img[1:-1, 1:-1].astype(bool)

    labels, n = ndimage.label(mask.data, structure=_EIGHT_CONNECTED)
    surviving = np.unique(labels[thin])
    if len(surviving) < n:
        lost = np.setdiff1d(np.arange(1, n + 1), surviving)
        # return_index gives the first row-major position of every label
        values, firsts = np.unique(labels.ravel(), return_index=True)
        thin.ravel()[firsts[np.searchsorted(values, lost)]] = True
    return BinaryMask(thin)


# -- Scores -------------------------------------------------------------------


def pf_score(pred: BinaryMask, gt: BinaryMask) -> float:
    _same_shape(pred.shape, gt.shape)
    skeleton = skeletonize(gt).data
    pseudo_recall = _ratio(np.count_nonzero(pred.data & skeleton), np.count_nonzero(skeleton))
    return _harmonic(precision(confusion(pred, gt)), pseudo_recall)


def psnr(pred: BinaryMask, gt: BinaryMask) -> float:
    """10*log10(1/MSE) over {0,1} masks; identical masks give math.inf."""
    _same_shape(pred.shape, gt.shape)
    differing = np.count_nonzero(pred.data != gt.data)
    if differing == 0:
        return math.inf
    return 10.0 * math.log10(pred.data.size / differing)


def bce(prob: ProbabilityMap, gt: BinaryMask) -> float:
    """Mean binary cross-entropy in nats per pixel."""
    _same_shape(prob.shape, gt.shape)
    p = np.clip(prob.data, BCE_EPSILON, 1.0 - BCE_EPSILON)
    y = gt.data
    losses = np.where(y, -np.log(p), -np.log1p(-p))
    return float(np.mean(losses))


def evaluate(pred: BinaryMask, gt: BinaryMask, prob: ProbabilityMap | None = None) -> MetricReport:
    return MetricReport(
        f_score=f_score(confusion(pred, gt)),
        pf_score=pf_score(pred, gt),
        psnr=psnr(pred, gt),
        bce=bce(prob, gt) if prob is not None else None,
    )
