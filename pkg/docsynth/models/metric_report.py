import math
from dataclasses import dataclass, field

import numpy as np

from docsynth.models.errors import ParameterError


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True, eq=False)
class ProbabilityMap:
    """Externally produced per-pixel ink probabilities."""

    data: np.ndarray  # (H, W) float64 in [0, 1]

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim != 2:
            raise ParameterError(f"probability map must be 2-D, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)) or arr.min() < 0.0 or arr.max() > 1.0:
            raise ParameterError("probabilities must lie in [0, 1]")
        object.__setattr__(self, "data", arr)

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape


@dataclass
class MetricReport:
    f_score: float = 0.0
    pf_score: float = 0.0
    psnr: float = 0.0  # math.inf for identical masks
    bce: float | None = None

    def to_dict(self) -> dict:
        return {
            "f_score": self.f_score,
            "pf_score": self.pf_score,
            "psnr": "inf" if math.isinf(self.psnr) else self.psnr,
            "bce": self.bce,
        }


@dataclass
class ImageScore:
    stem: str
    report: MetricReport

    def to_dict(self) -> dict:
        return {"stem": self.stem, **self.report.to_dict()}


@dataclass
class CorpusReport:
    name: str = ""
    images: list[ImageScore] = field(default_factory=list)
    mean_f_score: float = 0.0
    mean_pf_score: float = 0.0
    mean_psnr: float | None = None  # None when every PSNR was infinite
    mean_bce: float | None = None
    psnr_infinite: int = 0
    unmatched_pred: list[str] = field(default_factory=list)
    unmatched_gt: list[str] = field(default_factory=list)
