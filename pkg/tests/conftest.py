import os

import numpy as np
import pytest

from docsynth.models.catalog import BackgroundAsset, ContentAsset
from docsynth.models.raster import BinaryMask, RasterImage
from docsynth.services import raster_io
from docsynth.services.catalog_store import save_backgrounds, save_contents
from docsynth.services.demo_assets import build_demo_assets


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    """Tests never see DOCSYNTH_* settings from the developer's shell or .env."""
    for key in list(os.environ):
        if key.startswith("DOCSYNTH_"):
            monkeypatch.delenv(key, raising=False)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def demo(tmp_path_factory):
    """The procedural demo asset set, built once per session."""
    return build_demo_assets(tmp_path_factory.mktemp("demo"), seed=7)


def stroke_content(size: int = 32, seed: int = 0) -> tuple[RasterImage, BinaryMask]:
    """White patch with dark strokes kept 4 pixels away from the border, plus its exact mask."""
    r = np.random.default_rng(seed)
    ink = np.zeros((size, size), dtype=bool)
    for _ in range(3):
        y = int(r.integers(6, size - 8))
        x0 = int(r.integers(4, size // 2))
        x1 = int(r.integers(size // 2 + 2, size - 4))
        ink[y:y + 2, x0:x1] = True
        x = int(r.integers(6, size - 8))
        ink[4:size - 4, x:x + 2] = True
    img = np.where(ink, 0.15, 1.0)
    return RasterImage(img), BinaryMask(ink)


def write_catalogs(root, contents: list[tuple[RasterImage, BinaryMask]], backgrounds: list[RasterImage],
                   page_styles: list[str] | None = None) -> tuple[str, str]:
    """Write PNG assets plus contents.jsonl / backgrounds.jsonl; returns both catalog paths."""
    content_rows = []
    for i, (img, mask) in enumerate(contents):
        raster_io.save_image(root / "content" / f"c{i}.png", img)
        raster_io.save_mask(root / "content_gt" / f"c{i}.png", mask)
        content_rows.append(ContentAsset(f"c{i}", f"content/c{i}.png", f"content_gt/c{i}.png"))
    bg_rows = []
    for i, img in enumerate(backgrounds):
        raster_io.save_image(root / "backgrounds" / f"b{i}.png", img)
        style = page_styles[i % len(page_styles)] if page_styles else "plain"
        bg_rows.append(BackgroundAsset(f"b{i}", f"backgrounds/b{i}.png", style, ["noisy_background"]))
    save_contents(root / "contents.jsonl", content_rows)
    save_backgrounds(root / "backgrounds.jsonl", bg_rows)
    return str(root / "contents.jsonl"), str(root / "backgrounds.jsonl")
