"""Global (Otsu) and local adaptive thresholding, and ground-truth extraction.

Ink is foreground: Otsu labels levels <= threshold, the adaptive rule labels
pixels darker than their local mean minus an offset.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np
from scipy import ndimage

from docsynth.models.errors import ParameterError
from docsynth.models.raster import BinaryMask, RasterImage
from docsynth.services import raster_io
from docsynth.services.raster_ops import to_grayscale

logger = logging.getLogger(__name__)

_EIGHT_NEIGHBOURS = np.array([[1, 1, 1], [1, 0, 1], [1, 1, 1]], dtype=np.uint8)


class ThresholdMethod(Enum):
    MEAN = "mean"
    GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class AdaptiveParams:
    window: int = 31
    offset: float = 0.06  # about 15/255
    method: ThresholdMethod = ThresholdMethod.MEAN

    def __post_init__(self):
        if isinstance(self.method, str):
            try:
                object.__setattr__(self, "method", ThresholdMethod(self.method))
            except ValueError:
                raise ParameterError(f"unknown threshold method {self.method!r}") from None
        if self.window < 3 or self.window % 2 == 0:
            raise ParameterError(f"window must be odd and >= 3, got {self.window}")
        if not -1.0 <= self.offset <= 1.0:
            raise ParameterError(f"offset must lie in [-1, 1], got {self.offset}")

    @property
    def radius(self) -> int:
        return self.window // 2

    @property
    def sigma(self) -> float:
        return self.window / 6.0


def _require_gray(img: RasterImage) -> np.ndarray:
    if img.channels != 1:
        raise ParameterError("thresholding expects a single-channel image")
    return img.data


def otsu(img: RasterImage) -> tuple[int, BinaryMask]:
    """Exact Otsu over the 256-bin histogram; the smallest maximizing level wins.

    Between-class variances are compared as exact integer ratios so ties are
    resolved identically on every platform. A constant image yields threshold 0
    and an all-background mask.
    """
    _require_gray(img)
    levels = img.to_uint8()
    hist = np.bincount(levels.ravel(), minlength=256).tolist()
    total_n = levels.size
    total_s = sum(i * h for i, h in enumerate(hist))

    best_t = None
    best_num, best_den = 0, 1
    n0 = s0 = 0
    for t in range(256):
        n0 += hist[t]
        s0 += t * hist[t]
        n1 = total_n - n0
        if n0 == 0 or n1 == 0:
            continue
        # sigma_b^2 * N^2 = (s0*n1 - s1*n0)^2 / (n0*n1)
        num = (s0 * n1 - (total_s - s0) * n0) ** 2
        den = n0 * n1
        if best_t is None or num * best_den > best_num * den:
            best_t, best_num, best_den = t, num, den

    if best_t is None:
        logger.debug("Otsu on a constant image, returning an empty mask")
        return 0, BinaryMask.empty(img.height, img.width)
    return best_t, BinaryMask(levels <= best_t)


def local_mean(gray: np.ndarray, params: AdaptiveParams) -> np.ndarray:
    """Window-weighted local mean with edge-replication padding."""
    if params.method is ThresholdMethod.MEAN:
        return ndimage.uniform_filter(gray, size=params.window, mode="nearest")
    return ndimage.gaussian_filter(gray, sigma=params.sigma, mode="nearest", radius=params.radius)


def adaptive_threshold(img: RasterImage, params: AdaptiveParams) -> BinaryMask:
    gray = _require_gray(img)
    limit = 2 * min(img.width, img.height) + 1
    if params.window > limit:
        raise ParameterError(
            f"window {params.window} too large for a {img.width}x{img.height} image (max {limit})"
        )
    return BinaryMask(gray < local_mean(gray, params) - params.offset)


def despeckle(mask: BinaryMask) -> BinaryMask:
    """Clear ink pixels that have no ink among their 8 neighbours."""
    counts = ndimage.convolve(mask.data.astype(np.uint8), _EIGHT_NEIGHBOURS, mode="constant", cval=0)
    return BinaryMask(mask.data & (counts > 0))


def extract_ground_truth(
    doc: RasterImage,
    params: AdaptiveParams | None = None,
    clean: bool = True,
) -> BinaryMask:
    """Ground truth of a clean-background document: luma, adaptive threshold, despeckle."""
    params = params or AdaptiveParams()
    mask = adaptive_threshold(to_grayscale(doc), params)
    if clean:
        mask = despeckle(mask)
    return mask


def extract_ground_truth_file(
    in_path: str | Path,
    out_path: str | Path,
    params: AdaptiveParams,
    clean: bool = True,
) -> int:
    """File-to-file variant used by the gt command. Returns the ink pixel count."""
    mask = extract_ground_truth(raster_io.load_image(in_path), params, clean=clean)
    raster_io.save_mask(out_path, mask)
    logger.debug("Ground truth %s -> %s (%d ink pixels)", in_path, out_path, mask.foreground_count)
    return mask.foreground_count
