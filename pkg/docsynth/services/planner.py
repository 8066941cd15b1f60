"""Manifest planning: pair every content with k distinct, seeded backgrounds."""

import logging
from pathlib import Path

from docsynth.models.catalog import AssetCatalog
from docsynth.models.errors import DocsynthError
from docsynth.models.manifest import MANIFEST_FIELDS, GenerationConfig, ManifestRecord
from docsynth.models.raster import Transform
from docsynth.services.sampling import content_stream, partial_shuffle, record_seed
from docsynth.services.storage import JsonLinesError, read_jsonl, write_jsonl

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.jsonl"


class PlanningError(DocsynthError, ValueError):
    """Raised when a plan cannot satisfy its configuration."""


def input_path(sample_id: int) -> str:
    return f"inputs/{sample_id}.png"


def gt_path(sample_id: int) -> str:
    return f"gts/{sample_id}.png"


def check_config(config: GenerationConfig, catalog: AssetCatalog) -> None:
    n_backgrounds = len(catalog.backgrounds)
    if not catalog.contents:
        raise PlanningError("the contents catalog is empty")
    if config.per_content < 1:
        raise PlanningError(f"per-content count must be >= 1, got {config.per_content}")
    if config.per_content > n_backgrounds:
        raise PlanningError(
            f"per-content count {config.per_content} exceeds the {n_backgrounds} available backgrounds"
        )
    if not 0 <= config.global_seed < 2**64:
        raise PlanningError("seed must fit in an unsigned 64-bit integer")
    for kind, ids in (
        ("content", [c.content_id for c in catalog.contents]),
        ("background", [b.background_id for b in catalog.backgrounds]),
    ):
        if len(set(ids)) != len(ids):
            raise PlanningError(f"duplicate {kind} ids in catalog")


def plan(config: GenerationConfig, catalog: AssetCatalog) -> list[ManifestRecord]:
    """Records ordered by (content index, draw index); sample ids 0..N-1."""
    check_config(config, catalog)
    k = config.per_content
    identity = Transform.identity()
    backgrounds = catalog.backgrounds
    records = []
    sample_id = 0
    for content in catalog.contents:
        stream = content_stream(config.global_seed, content.content_id)
        for b_index in partial_shuffle(len(backgrounds), k, stream):
            seed = record_seed(config.global_seed, sample_id)
            transform = Transform.from_index(seed >> 61) if config.augment else identity
            records.append(ManifestRecord(
                sample_id=sample_id,
                content_id=content.content_id,
                background_id=backgrounds[b_index].background_id,
                transform=transform,
                seed=seed,
                out_input=input_path(sample_id),
                out_gt=gt_path(sample_id),
            ))
            sample_id += 1
    logger.info("Planned %d samples (%d contents x %d backgrounds)", len(records), len(catalog.contents), k)
    return records


def write_manifest(path: str | Path, records: list[ManifestRecord]) -> int:
    return write_jsonl(path, (r.to_dict() for r in records))


def read_manifest(path: str | Path) -> list[ManifestRecord]:
    try:
        rows = read_jsonl(path)
    except JsonLinesError as e:
        raise PlanningError(str(e)) from None
    records = []
    for lineno, row in enumerate(rows, 1):
        missing = [f for f in MANIFEST_FIELDS if f not in row]
        if missing:
            raise PlanningError(f"{path}: record {lineno} is missing {', '.join(missing)}")
        records.append(ManifestRecord.from_dict(row))
    for expected, r in enumerate(records):
        if r.sample_id != expected:
            raise PlanningError(f"{path}: sample ids must run 0..N-1, found {r.sample_id} at position {expected}")
    return records
