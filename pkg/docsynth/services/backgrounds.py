"""Photorealistic backgrounds: degradation patches cloned onto page-style patches."""

import logging
from pathlib import Path

from docsynth.models.catalog import DEGRADATION_TAGS, BackgroundAsset
from docsynth.models.errors import DimensionMismatchError, ParameterError
from docsynth.models.raster import RasterImage
from docsynth.services import raster_io
from docsynth.services.catalog_store import load_backgrounds, resolve, save_backgrounds
from docsynth.services.poisson_clone import CloneMode, CloneRequest, full_patch_region, seamless_clone
from docsynth.services.raster_ops import grayscale_to_rgb
from docsynth.services.sampling import SplitMix64, mix64

logger = logging.getLogger(__name__)

BACKGROUNDS_NAME = "backgrounds.jsonl"


def compose_background(
    page: RasterImage,
    degradation: RasterImage,
    mode: CloneMode | str = CloneMode.MIXED,
    tol: float = 1e-8,
) -> RasterImage:
    """Clone the degradation patch (source) onto the page-style patch (target)."""
    if page.shape != degradation.shape:
        raise DimensionMismatchError(
            f"page patch {page.shape} and degradation patch {degradation.shape} must be the same size"
        )
    if page.channels != degradation.channels:
        page, degradation = grayscale_to_rgb(page), grayscale_to_rgb(degradation)
    req = CloneRequest(
        source=degradation,
        target=page,
        region=full_patch_region(page.width, page.height),
        mode=CloneMode(mode),
    )
    return seamless_clone(req, tol=tol)


def merged_tags(page: BackgroundAsset, degradation: BackgroundAsset) -> list[str]:
    """Union of both parents' degradation tags in vocabulary order."""
    tags = set(page.degradations) | set(degradation.degradations)
    return [t for t in DEGRADATION_TAGS if t in tags]


def background_name(index: int) -> str:
    return f"bg_{index:05d}"


def generate_backgrounds(
    pages_path: str | Path,
    degradations_path: str | Path,
    count: int,
    seed: int,
    out_dir: str | Path,
    mode: CloneMode | str = CloneMode.MIXED,
    tol: float = 1e-8,
) -> list[BackgroundAsset]:
    """Write count composed backgrounds plus backgrounds.jsonl under out_dir.

    Output i pairs the page and degradation patches drawn by a stream seeded
    with mix64(seed, i), so any single background can be regenerated alone.
    """
    if count < 1:
        raise ParameterError(f"background count must be >= 1, got {count}")
    pages = load_backgrounds(pages_path)
    degradations = load_backgrounds(degradations_path)
    if not pages or not degradations:
        raise ParameterError("page and degradation catalogs must both be non-empty")
    for p in pages:
        if p.page_style is None:
            raise ParameterError(f"{pages_path}: page patch {p.background_id} has no page style")

    out_dir = Path(out_dir)
    assets = []
    for i in range(count):
        stream = SplitMix64(mix64(seed, i))
        page = pages[stream.below(len(pages))]
        degradation = degradations[stream.below(len(degradations))]
        composed = compose_background(
            raster_io.load_image(resolve(pages_path, page.path)),
            raster_io.load_image(resolve(degradations_path, degradation.path)),
            mode=mode,
            tol=tol,
        )
        name = background_name(i)
        raster_io.save_image(out_dir / "backgrounds" / f"{name}.png", composed)
        assets.append(BackgroundAsset(
            background_id=name,
            path=f"backgrounds/{name}.png",
            page_style=page.page_style,
            degradations=merged_tags(page, degradation),
        ))
        logger.debug("%s = %s + %s", name, page.background_id, degradation.background_id)

    save_backgrounds(out_dir / BACKGROUNDS_NAME, assets)
    logger.info("Composed %d backgrounds in %s", len(assets), out_dir)
    return assets
