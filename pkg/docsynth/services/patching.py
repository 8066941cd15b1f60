"""Fixed-size patch extraction and dihedral augmentation.

Offsets walk a stride grid in row-major order; trailing regions that the grid
does not cover are dropped. Content and ground truth always share offsets
and transforms.
"""

import glob
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from docsynth.models.catalog import ContentAsset
from docsynth.models.errors import DimensionMismatchError, ParameterError
from docsynth.models.raster import BinaryMask, RasterImage, Transform
from docsynth.services import raster_io
from docsynth.services.raster_ops import apply_transform, apply_transform_mask, crop, crop_mask
from docsynth.services.storage import write_jsonl
from docsynth.services.thresholding import AdaptiveParams, extract_ground_truth

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PatchSpec:
    size: int = 480
    stride: int = 480

    def __post_init__(self):
        if self.size < 1:
            raise ParameterError(f"patch size must be >= 1, got {self.size}")
        if self.stride < 1:
            raise ParameterError(f"patch stride must be >= 1, got {self.stride}")


@dataclass
class CropResult:
    patches: list[tuple[tuple[int, int], RasterImage]] = field(default_factory=list)
    too_small: bool = False  # image smaller than the patch; not an error

    def __iter__(self):
        return iter(self.patches)

    def __len__(self) -> int:
        return len(self.patches)

    def offsets(self) -> list[tuple[int, int]]:
        return [offset for offset, _ in self.patches]


@dataclass
class AlignedPatch:
    offset: tuple[int, int]  # (x, y)
    patch: RasterImage
    gt: BinaryMask

    def transformed(self, t: Transform) -> "AlignedPatch":
        return AlignedPatch(self.offset, apply_transform(self.patch, t), apply_transform_mask(self.gt, t))


def crop_offsets(width: int, height: int, spec: PatchSpec) -> list[tuple[int, int]]:
    """(x, y) offsets; floor((dim - size) / stride) + 1 per axis."""
    if width < spec.size or height < spec.size:
        return []
    xs = range(0, width - spec.size + 1, spec.stride)
    ys = range(0, height - spec.size + 1, spec.stride)
    return [(x, y) for y in ys for x in xs]


def crop_patches(img: RasterImage, spec: PatchSpec) -> CropResult:
    offsets = crop_offsets(img.width, img.height, spec)
    if not offsets:
        logger.warning("Image %dx%d is smaller than patch size %d, no patches",
                       img.width, img.height, spec.size)
        return CropResult(too_small=True)
    return CropResult([((x, y), crop(img, x, y, spec.size, spec.size)) for x, y in offsets])


def augment_set(patch: RasterImage) -> list[RasterImage]:
    """The 8 dihedral variants in Transform.all() order; element 0 is the input."""
    if patch.width != patch.height:
        raise ParameterError(f"augmentation needs a square patch, got {patch.width}x{patch.height}")
    return [apply_transform(patch, t) for t in Transform.all()]


def crop_aligned(img: RasterImage, gt: BinaryMask, spec: PatchSpec) -> list[AlignedPatch]:
    if img.shape != gt.shape:
        raise DimensionMismatchError(f"image {img.shape} and ground truth {gt.shape} differ in size")
    pairs = []
    for (x, y), patch in crop_patches(img, spec):
        pairs.append(AlignedPatch((x, y), patch, crop_mask(gt, x, y, spec.size, spec.size)))
    return pairs


def patch_file_name(stem: str, ox: int, oy: int, t_index: int) -> str:
    return f"{stem}_x{ox}_y{oy}_t{t_index}.png"


# -- File-level entry points used by the patch command ----------------------


def expand_pattern(pattern: str) -> list[Path]:
    return sorted(Path(p) for p in glob.glob(pattern, recursive=True) if Path(p).is_file())


def _transforms(augment: bool) -> list[Transform]:
    return Transform.all() if augment else [Transform.identity()]


def patch_file(path: Path, out_dir: Path, spec: PatchSpec, augment: bool) -> int:
    """Crop one image into out_dir. Returns the number of files written."""
    written = 0
    for (x, y), patch in crop_patches(raster_io.load_image(path), spec):
        for t in _transforms(augment):
            raster_io.save_image(out_dir / patch_file_name(path.stem, x, y, t.index), apply_transform(patch, t))
            written += 1
    return written


def patch_files(pattern: str, out_dir: str | Path, spec: PatchSpec, augment: bool = False, jobs: int = 1) -> int:
    paths = expand_pattern(pattern)
    if not paths:
        raise ParameterError(f"no files match {pattern!r}")
    out_dir = Path(out_dir)
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        counts = list(pool.map(lambda p: patch_file(p, out_dir, spec, augment), paths))
    logger.info("Wrote %d patches from %d images to %s", sum(counts), len(paths), out_dir)
    return sum(counts)


def _content_assets_for(
    path: Path, out_dir: Path, spec: PatchSpec, params: AdaptiveParams, augment: bool, skip_blank: bool,
) -> list[ContentAsset]:
    doc = raster_io.load_image(path)
    gt = extract_ground_truth(doc, params)
    assets = []
    for pair in crop_aligned(doc, gt, spec):
        if skip_blank and pair.gt.is_empty():
            continue
        x, y = pair.offset
        for t in _transforms(augment):
            moved = pair.transformed(t)
            name = patch_file_name(path.stem, x, y, t.index)
            raster_io.save_image(out_dir / "content" / name, moved.patch)
            raster_io.save_mask(out_dir / "content_gt" / name, moved.gt)
            assets.append(ContentAsset(
                content_id=Path(name).stem,
                patch=f"content/{name}",
                gt=f"content_gt/{name}",
            ))
    return assets


def build_content_assets(
    pattern: str,
    out_dir: str | Path,
    spec: PatchSpec,
    params: AdaptiveParams | None = None,
    augment: bool = False,
    skip_blank: bool = False,
    jobs: int = 1,
) -> list[ContentAsset]:
    """Full-length documents -> content patches, their ground truths and contents.jsonl.

    Paths in the catalog are relative to out_dir, where contents.jsonl lives.
    """
    params = params or AdaptiveParams()
    paths = expand_pattern(pattern)
    if not paths:
        raise ParameterError(f"no files match {pattern!r}")
    stems = [p.stem for p in paths]
    if len(set(stems)) != len(stems):
        raise ParameterError(f"documents matched by {pattern!r} must have distinct file stems")
    out_dir = Path(out_dir)

    with ThreadPoolExecutor(max_workers=jobs) as pool:
        per_doc = list(pool.map(
            lambda p: _content_assets_for(p, out_dir, spec, params, augment, skip_blank), paths,
        ))
    assets = [a for batch in per_doc for a in batch]

    write_jsonl(out_dir / "contents.jsonl", [a.to_dict() for a in assets])
    logger.info("Built %d content patches from %d documents in %s", len(assets), len(paths), out_dir)
    return assets
