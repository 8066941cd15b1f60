"""Procedural desk-scale asset set: handwriting-like documents, page styles,
degradation patches, composed backgrounds and both catalogs.

Everything is drawn from a seeded numpy Generator, so the same seed always
produces the same bytes.
"""

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, ImageDraw
from scipy import ndimage

from docsynth.models.catalog import BackgroundAsset, Degradation, PageStyle
from docsynth.models.raster import RasterImage
from docsynth.services import raster_io
from docsynth.services.backgrounds import BACKGROUNDS_NAME, background_name, compose_background, merged_tags
from docsynth.services.catalog_store import save_backgrounds
from docsynth.services.patching import PatchSpec, build_content_assets
from docsynth.services.thresholding import AdaptiveParams

logger = logging.getLogger(__name__)

PATCH = 128
DOC_WIDTH = 256
DOC_HEIGHT = 384

DEMO_DEGRADATIONS = (
    Degradation.SHADOW_GRADIENTS,
    Degradation.LIQUID_STAINS,
    Degradation.NOISY_BACKGROUND,
    Degradation.NONUNIFORM_ILLUMINATION,
    Degradation.INK_BLEED_THROUGH,
    Degradation.CRUMPLED_PAGES,
)


@dataclass
class DemoAssets:
    root: Path
    contents: Path
    backgrounds: Path
    pages: Path
    degradations: Path
    n_contents: int
    n_backgrounds: int


# -- Handwriting ----------------------------------------------------------------


def _scribble(draw: ImageDraw.ImageDraw, rng: np.random.Generator, x0: int, x1: int, baseline: int) -> None:
    """Cursive-looking polylines between x0 and x1 along a baseline."""
    x = x0 + int(rng.integers(0, 10))
    while x < x1 - 20:
        word_end = min(x1, x + int(rng.integers(18, 60)))
        points = []
        y = float(baseline)
        while x < word_end:
            y = 0.6 * y + 0.4 * (baseline + rng.normal(0.0, 5.0))
            points.append((x, int(round(y))))
            x += int(rng.integers(2, 6))
        if len(points) > 1:
            ink = int(rng.integers(20, 70))
            draw.line(points, fill=ink, width=int(rng.integers(2, 4)), joint="curve")
        x += int(rng.integers(8, 18))


def handwritten_document(rng: np.random.Generator, width: int = DOC_WIDTH, height: int = DOC_HEIGHT) -> RasterImage:
    """Clean full-length page: dark strokes on white."""
    im = Image.new("L", (width, height), 255)
    draw = ImageDraw.Draw(im)
    for baseline in range(24, height - 12, 30):
        _scribble(draw, rng, 8, width - 8, baseline)
    return RasterImage.from_uint8(np.asarray(im))


# -- Page styles ------------------------------------------------------------------


def _paper(rng: np.random.Generator, size: int) -> np.ndarray:
    grain = ndimage.gaussian_filter(rng.normal(0.0, 0.02, (size, size)), 1.5)
    return np.clip(0.93 + grain, 0.0, 1.0)


def _rule(img: np.ndarray, rows, level: float = 0.72) -> None:
    for r in rows:
        img[int(r), :] = np.minimum(img[int(r), :], level)


def page_style_patch(style: PageStyle, rng: np.random.Generator, size: int = PATCH) -> RasterImage:
    img = _paper(rng, size)
    if style is PageStyle.UNIFORM_RULED_LINES:
        _rule(img, range(12, size, 16))
    elif style is PageStyle.NONUNIFORM_RULED_LINES:
        rows = np.cumsum(rng.integers(10, 24, size // 10))
        _rule(img, rows[rows < size])
    elif style is PageStyle.GRID_LINES:
        _rule(img, range(8, size, 16), 0.8)
        img[:, 8::16] = np.minimum(img[:, 8::16], 0.8)
    elif style is PageStyle.STAFF_NOTATION_LINES:
        for top in range(10, size - 20, 32):
            _rule(img, range(top, top + 20, 5), 0.6)
    elif style is PageStyle.PARTIALLY_BLANK:
        _rule(img, range(12, size // 2, 16))
    return RasterImage(img)


# -- Degradations ---------------------------------------------------------------


def degradation_patch(kind: Degradation, rng: np.random.Generator, size: int = PATCH) -> RasterImage:
    yy, xx = np.mgrid[0:size, 0:size] / (size - 1)
    base = np.full((size, size), 0.92)

    if kind is Degradation.SHADOW_GRADIENTS:
        angle = rng.uniform(0, 2 * np.pi)
        ramp = np.cos(angle) * xx + np.sin(angle) * yy
        ramp = (ramp - ramp.min()) / ((ramp.max() - ramp.min()) or 1.0)
        img = base - 0.45 * ramp**2
    elif kind is Degradation.LIQUID_STAINS:
        img = base.copy()
        for _ in range(3):
            cy, cx = rng.uniform(0.2, 0.8, 2)
            r = rng.uniform(0.12, 0.3)
            d = np.hypot(yy - cy, xx - cx)
            img -= 0.25 * np.exp(-((d - r) ** 2) / 0.002) + 0.08 * (d < r)
    elif kind is Degradation.NOISY_BACKGROUND:
        img = base + rng.normal(0.0, 0.06, (size, size))
    elif kind is Degradation.NONUNIFORM_ILLUMINATION:
        cy, cx = rng.uniform(0.3, 0.7, 2)
        img = base - 0.4 * np.hypot(yy - cy, xx - cx)
    elif kind is Degradation.INK_BLEED_THROUGH:
        im = Image.new("L", (size, size), 255)
        draw = ImageDraw.Draw(im)
        for baseline in range(16, size - 8, 26):
            _scribble(draw, rng, 4, size - 4, baseline)
        verso = np.asarray(im, dtype=np.float64)[:, ::-1] / 255.0
        img = base - 0.25 * (1.0 - ndimage.gaussian_filter(verso, 1.2))
    elif kind is Degradation.CRUMPLED_PAGES:
        field = ndimage.gaussian_filter(rng.normal(0.0, 1.0, (size, size)), 6.0)
        creases = np.hypot(*np.gradient(field))
        img = base - 0.5 * creases / (creases.max() or 1.0)
    else:
        img = base + rng.normal(0.0, 0.02, (size, size))
    return RasterImage(np.clip(img, 0.0, 1.0))


# -- Whole set --------------------------------------------------------------------


def build_demo_assets(out_dir: str | Path, seed: int = 0, n_docs: int = 2, jobs: int = 1) -> DemoAssets:
    """Write the demo asset tree under out_dir.

    n_docs documents of 256x384 give 6 content patches each. Backgrounds pair
    page styles and degradations round-robin, every page style with two
    different degradations.
    """
    root = Path(out_dir)
    rng = np.random.default_rng(seed)

    for i in range(n_docs):
        raster_io.save_image(root / "docs" / f"doc_{i:03d}.png", handwritten_document(rng))
    contents = build_content_assets(
        str(root / "docs" / "*.png"), root, PatchSpec(PATCH, PATCH), AdaptiveParams(), jobs=jobs,
    )

    pages = []
    page_images = []
    for style in PageStyle:
        name = f"page_{style.value}"
        img = page_style_patch(style, rng)
        raster_io.save_image(root / "pages" / f"{name}.png", img)
        pages.append(BackgroundAsset(background_id=name, path=f"pages/{name}.png", page_style=style.value))
        page_images.append(img)
    save_backgrounds(root / "pages.jsonl", pages)

    degradations = []
    degradation_images = []
    for kind in DEMO_DEGRADATIONS:
        name = f"deg_{kind.value}"
        img = degradation_patch(kind, rng)
        raster_io.save_image(root / "degradations" / f"{name}.png", img)
        degradations.append(BackgroundAsset(
            background_id=name, path=f"degradations/{name}.png", degradations=[kind.value],
        ))
        degradation_images.append(img)
    save_backgrounds(root / "degradations.jsonl", degradations)

    backgrounds = []
    n_pages, n_degs = len(pages), len(degradations)
    for i in range(2 * n_pages):
        p, d = i % n_pages, (i + i // n_pages) % n_degs
        name = background_name(i)
        raster_io.save_image(
            root / "backgrounds" / f"{name}.png",
            compose_background(page_images[p], degradation_images[d]),
        )
        backgrounds.append(BackgroundAsset(
            background_id=name,
            path=f"backgrounds/{name}.png",
            page_style=pages[p].page_style,
            degradations=merged_tags(pages[p], degradations[d]),
        ))
    save_backgrounds(root / BACKGROUNDS_NAME, backgrounds)

    logger.info("Demo assets in %s: %d contents, %d backgrounds", root, len(contents), len(backgrounds))
    return DemoAssets(
        root=root,
        contents=root / "contents.jsonl",
        backgrounds=root / BACKGROUNDS_NAME,
        pages=root / "pages.jsonl",
        degradations=root / "degradations.jsonl",
        n_contents=len(contents),
        n_backgrounds=len(backgrounds),
    )
