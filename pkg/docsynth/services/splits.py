"""Train / validation / test assignment and training subsets.

Splits are drawn per content id so every sample of one handwritten content
lands in the same split.
"""

import logging
import math
from pathlib import Path

from docsynth.models.errors import ParameterError
from docsynth.models.manifest import ManifestRecord
from docsynth.services.sampling import SplitMix64, fnv1a64, mix64, partial_shuffle
from docsynth.services.storage import atomic_write_text

logger = logging.getLogger(__name__)

SPLIT_NAMES = ("train", "val", "test")
DEFAULT_RATIOS = (0.8, 0.1, 0.1)

# Salts keep split and subset streams apart when both use the same seed.
_SPLIT_SALT = fnv1a64("splits")
_SUBSET_SALT = fnv1a64("subset")


def _check_ratios(ratios: tuple[float, float, float]) -> None:
    if len(ratios) != 3 or any(r < 0 for r in ratios) or not math.isclose(sum(ratios), 1.0, abs_tol=1e-9):
        raise ParameterError(f"split ratios must be three non-negative numbers summing to 1, got {ratios}")


def assign_splits(
    manifest: list[ManifestRecord],
    ratios: tuple[float, float, float] = DEFAULT_RATIOS,
    seed: int = 0,
) -> dict[str, list[int]]:
    """Sample ids per split, each list ascending."""
    _check_ratios(ratios)
    content_ids = list(dict.fromkeys(r.content_id for r in manifest))
    n = len(content_ids)
    order = partial_shuffle(n, n, SplitMix64(mix64(seed, _SPLIT_SALT)))
    n_train = math.floor(n * ratios[0])
    n_val = math.floor(n * ratios[1])

    split_of: dict[str, str] = {}
    for position, idx in enumerate(order):
        if position < n_train:
            split_of[content_ids[idx]] = "train"
        elif position < n_train + n_val:
            split_of[content_ids[idx]] = "val"
        else:
            split_of[content_ids[idx]] = "test"

    result: dict[str, list[int]] = {name: [] for name in SPLIT_NAMES}
    for r in manifest:
        result[split_of[r.content_id]].append(r.sample_id)
    for ids in result.values():
        ids.sort()
    logger.info("Splits over %d contents: %s", n, ", ".join(f"{k}={len(v)}" for k, v in result.items()))
    return result


def subsample(manifest: list[ManifestRecord], n: int, seed: int = 0) -> list[ManifestRecord]:
    """Deterministic n-sample subset, kept in manifest order."""
    if not 1 <= n <= len(manifest):
        raise ParameterError(f"subset size must lie in 1..{len(manifest)}, got {n}")
    picked = sorted(partial_shuffle(len(manifest), n, SplitMix64(mix64(seed, _SUBSET_SALT))))
    return [manifest[i] for i in picked]


def write_splits(root: str | Path, splits: dict[str, list[int]]) -> list[Path]:
    out = Path(root) / "splits"
    paths = []
    for name in SPLIT_NAMES:
        path = out / f"{name}.txt"
        atomic_write_text(path, "".join(f"{sid}\n" for sid in splits[name]))
        paths.append(path)
    return paths
