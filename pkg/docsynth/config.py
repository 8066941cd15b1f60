import os
import logging
from dataclasses import dataclass
from pathlib import Path

from dotenv import load_dotenv

# Load .env file from project root
load_dotenv(Path(__file__).resolve().parent.parent / ".env")

logger = logging.getLogger(__name__)

_VALID_ENVIRONMENTS = {"local", "batch"}
_VALID_METHODS = {"mean", "gaussian"}


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name, "")
    if not raw.strip():
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from None


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name, "")
    if not raw.strip():
        return default
    try:
        return float(raw)
    except ValueError:
        raise ValueError(f"{name} must be a number, got {raw!r}") from None


@dataclass
class Settings:
    environment: str = "local"
    output_root: str = "./dataset"
    log_level: str = "INFO"
    jobs: int = 1
    gt_window: int = 31
    gt_offset: float = 0.06
    gt_method: str = "mean"
    patch_size: int = 480
    patch_stride: int = 480
    per_content: int = 100
    seed: int = 0
    cg_tolerance: float = 1e-8

    def __post_init__(self):
        self.environment = os.getenv("DOCSYNTH_ENVIRONMENT", "local").strip().lower()
        self.output_root = os.getenv("DOCSYNTH_OUTPUT_ROOT", "./dataset")
        self.log_level = os.getenv("DOCSYNTH_LOG_LEVEL", "INFO").strip().upper()
        self.jobs = _env_int("DOCSYNTH_JOBS", os.cpu_count() or 1)
        self.gt_window = _env_int("DOCSYNTH_GT_WINDOW", 31)
        self.gt_offset = _env_float("DOCSYNTH_GT_OFFSET", 0.06)
        self.gt_method = os.getenv("DOCSYNTH_GT_METHOD", "mean").strip().lower()
        self.patch_size = _env_int("DOCSYNTH_PATCH_SIZE", 480)
        self.patch_stride = _env_int("DOCSYNTH_PATCH_STRIDE", 480)
        self.per_content = _env_int("DOCSYNTH_PER_CONTENT", 100)
        self.seed = _env_int("DOCSYNTH_SEED", 0)
        self.cg_tolerance = _env_float("DOCSYNTH_CG_TOLERANCE", 1e-8)

        if self.environment not in _VALID_ENVIRONMENTS:
            raise ValueError(
                f"DOCSYNTH_ENVIRONMENT must be one of {sorted(_VALID_ENVIRONMENTS)}, "
                f"got {self.environment!r}"
            )
        if self.gt_method not in _VALID_METHODS:
            raise ValueError(
                f"DOCSYNTH_GT_METHOD must be one of {sorted(_VALID_METHODS)}, got {self.gt_method!r}"
            )
        if self.jobs < 1:
            logger.warning("DOCSYNTH_JOBS=%d is below 1, using 1", self.jobs)
            self.jobs = 1
        if not 0 <= self.seed < 2**64:
            raise ValueError("DOCSYNTH_SEED must fit in an unsigned 64-bit integer")
        if not 0 < self.cg_tolerance < 1:
            raise ValueError("DOCSYNTH_CG_TOLERANCE must lie in (0, 1)")
