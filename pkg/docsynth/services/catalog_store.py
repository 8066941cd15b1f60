"""Load, validate and save the two asset catalogs (contents and backgrounds)."""

import logging
from pathlib import Path

from docsynth.models.catalog import (
    DEGRADATION_TAGS,
    PAGE_STYLE_TAGS,
    AssetCatalog,
    BackgroundAsset,
    ContentAsset,
)
from docsynth.models.errors import DocsynthError
from docsynth.services.storage import JsonLinesError, read_jsonl, write_jsonl

logger = logging.getLogger(__name__)


class CatalogError(DocsynthError, ValueError):
    """Raised when a catalog has duplicate ids, unknown tags or missing files."""


def resolve(catalog_path: str | Path, asset_path: str) -> Path:
    """Relative asset paths are anchored at the catalog file's directory."""
    p = Path(asset_path)
    return p if p.is_absolute() else Path(catalog_path).resolve().parent / p


def _check_unique(ids: list[str], kind: str, path: str | Path) -> None:
    seen: set[str] = set()
    for item in ids:
        if item in seen:
            raise CatalogError(f"{path}: duplicate {kind} id {item!r}")
        seen.add(item)


def _check_exists(catalog_path: str | Path, asset_path: str, owner: str) -> None:
    if not resolve(catalog_path, asset_path).is_file():
        raise CatalogError(f"{catalog_path}: {owner} refers to missing file {asset_path}")


def validate_tags(asset: BackgroundAsset, source: str | Path = "") -> None:
    if asset.page_style is not None and asset.page_style not in PAGE_STYLE_TAGS:
        raise CatalogError(f"{source}: {asset.background_id} has unknown page style {asset.page_style!r}")
    for tag in asset.degradations:
        if tag not in DEGRADATION_TAGS:
            raise CatalogError(f"{source}: {asset.background_id} has unknown degradation {tag!r}")


def _records(path: str | Path) -> list[dict]:
    try:
        return read_jsonl(path)
    except JsonLinesError as e:
        raise CatalogError(str(e)) from None


def load_contents(path: str | Path, check_files: bool = True) -> list[ContentAsset]:
    try:
        contents = [ContentAsset.from_dict(r) for r in _records(path)]
    except KeyError as e:
        raise CatalogError(f"{path}: content record is missing field {e}") from None
    _check_unique([c.content_id for c in contents], "content", path)
    if check_files:
        for c in contents:
            _check_exists(path, c.patch, c.content_id)
            _check_exists(path, c.gt, c.content_id)
    return contents


def load_backgrounds(path: str | Path, check_files: bool = True) -> list[BackgroundAsset]:
    try:
        backgrounds = [BackgroundAsset.from_dict(r) for r in _records(path)]
    except KeyError as e:
        raise CatalogError(f"{path}: background record is missing field {e}") from None
    _check_unique([b.background_id for b in backgrounds], "background", path)
    for b in backgrounds:
        validate_tags(b, path)
        if check_files:
            _check_exists(path, b.path, b.background_id)
    return backgrounds


def load_catalog(contents_path: str | Path, backgrounds_path: str | Path, check_files: bool = True) -> AssetCatalog:
    """Both catalogs with asset paths rewritten to absolute paths."""
    contents = load_contents(contents_path, check_files)
    backgrounds = load_backgrounds(backgrounds_path, check_files)
    for c in contents:
        c.patch = str(resolve(contents_path, c.patch))
        c.gt = str(resolve(contents_path, c.gt))
    for b in backgrounds:
        b.path = str(resolve(backgrounds_path, b.path))
    logger.info("Catalog: %d contents, %d backgrounds", len(contents), len(backgrounds))
    return AssetCatalog(contents=contents, backgrounds=backgrounds)


def save_contents(path: str | Path, contents: list[ContentAsset]) -> int:
    return write_jsonl(path, [c.to_dict() for c in contents])


def save_backgrounds(path: str | Path, backgrounds: list[BackgroundAsset]) -> int:
    for b in backgrounds:
        validate_tags(b, path)
    return write_jsonl(path, [b.to_dict() for b in backgrounds])
