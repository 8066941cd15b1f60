"""Render a manifest into (input, ground truth) pairs.

Each sample is a pure function of its manifest record and the catalog, so the
tree on disk does not depend on how many workers render it or in what order.
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from docsynth.models.catalog import AssetCatalog
from docsynth.models.errors import DocsynthError
from docsynth.models.manifest import GenerationConfig, GenerationSummary, ManifestRecord, SampleFailure
from docsynth.services import job_tracker, raster_io
from docsynth.services.catalog_store import load_catalog
from docsynth.services.job_tracker import JobStatus
from docsynth.services.planner import MANIFEST_NAME, plan, write_manifest
from docsynth.services.poisson_clone import CloneMode, CloneRequest, full_patch_region, seamless_clone
from docsynth.services.raster_ops import apply_transform, apply_transform_mask, center_crop, match_channels
from docsynth.services.storage import remove_stale_temp_files

logger = logging.getLogger(__name__)

_PROGRESS_STEPS = 20


class GenerationError(DocsynthError):
    """Raised when a sample cannot be produced, or the run cannot start."""

    def __init__(self, message: str, sample_id: int | None = None, stage: str = ""):
        prefix = f"sample {sample_id}: " if sample_id is not None else ""
        super().__init__(prefix + message)
        self.sample_id = sample_id
        self.stage = stage


def is_complete(record: ManifestRecord, output_root: str | Path) -> bool:
    root = Path(output_root)
    return (root / record.out_input).is_file() and (root / record.out_gt).is_file()


def generate_one(
    record: ManifestRecord,
    catalog: AssetCatalog,
    output_root: str | Path,
    mode: CloneMode | str = CloneMode.MIXED,
    tolerance: float = 1e-8,
) -> None:
    """Clone the transformed content onto its background and write both outputs."""
    mode = CloneMode(mode)
    root = Path(output_root)
    try:
        content = catalog.content(record.content_id)
        background = catalog.background(record.background_id)
    except KeyError as e:
        raise GenerationError(f"unknown catalog id {e}", record.sample_id, "load") from None

    try:
        patch = raster_io.load_image(content.patch)
        gt = raster_io.load_mask(content.gt)
        bg = raster_io.load_image(background.path)
    except DocsynthError as e:
        raise GenerationError(str(e), record.sample_id, "load") from None

    try:
        patch = apply_transform(patch, record.transform)
        gt = apply_transform_mask(gt, record.transform)
        if gt.shape != patch.shape:
            raise GenerationError(
                f"content {record.content_id} patch {patch.shape} and ground truth {gt.shape} differ",
                record.sample_id, "load",
            )
        bg = center_crop(bg, patch.width, patch.height)
        source = match_channels(patch, bg.channels)
        req = CloneRequest(source=source, target=bg, region=full_patch_region(bg.width, bg.height), mode=mode)
        composite = seamless_clone(req, tol=tolerance)
    except GenerationError:
        raise
    except DocsynthError as e:
        raise GenerationError(str(e), record.sample_id, "clone") from None

    try:
        raster_io.save_image(root / record.out_input, composite)
        raster_io.save_mask(root / record.out_gt, gt)
    except OSError as e:
        raise GenerationError(f"write failed ({e})", record.sample_id, "write") from None


# -- Worker pool --------------------------------------------------------------

# Per-process state installed by the pool initializer.
_worker: dict = {}


def _init_worker(catalog: AssetCatalog, output_root: str, mode: str, tolerance: float) -> None:
    _worker.update(catalog=catalog, output_root=output_root, mode=mode, tolerance=tolerance)


def _render(row: dict) -> SampleFailure | None:
    record = ManifestRecord.from_dict(row)
    try:
        generate_one(record, _worker["catalog"], _worker["output_root"], _worker["mode"], _worker["tolerance"])
        return None
    except GenerationError as e:
        logger.warning("Sample %d failed during %s: %s", record.sample_id, e.stage, e)
        return SampleFailure(record.sample_id, e.stage, str(e))
    except Exception as e:
        logger.exception("Sample %d failed unexpectedly", record.sample_id)
        return SampleFailure(record.sample_id, "unknown", f"{type(e).__name__}: {e}")


def _account(job_id: str, row: dict, failure: SampleFailure | None, total: int, every: int) -> None:
    if failure is None:
        done = job_tracker.record_generated(job_id)
    else:
        done = job_tracker.record_failure(job_id, failure)
    if done % every == 0 or done == total:
        job = job_tracker.get_job(job_id)
        logger.info("Progress %d/%d (generated=%d failed=%d skipped=%d)",
                    done, total, job.generated, len(job.failures), job.skipped)


def run(config: GenerationConfig, catalog: AssetCatalog | None = None) -> GenerationSummary:
    """Plan, write the manifest, then render every sample.

    Per-sample failures are tallied in the summary; a manifest that cannot
    be written aborts the run.
    """
    started = time.monotonic()
    mode = CloneMode(config.clone_mode)
    root = Path(config.output_root)
    if catalog is None:
        catalog = load_catalog(config.contents_path, config.backgrounds_path)

    records = plan(config, catalog)
    job_id = job_tracker.create_job(str(root), total=len(records))
    job_tracker.update_job(job_id, status=JobStatus.RUNNING)
    job_tracker.enter_phase(job_id, "manifest")

    try:
        root.mkdir(parents=True, exist_ok=True)
        write_manifest(root / MANIFEST_NAME, records)
    except OSError as e:
        job_tracker.finish_job(job_id, JobStatus.FAILED)
        raise GenerationError(f"cannot write manifest under {root} ({e})", stage="manifest") from None

    if config.resume:
        remove_stale_temp_files(root)
        pending = [r for r in records if not is_complete(r, root)]
        job_tracker.record_skipped(job_id, len(records) - len(pending))
        logger.info("Resuming: %d of %d samples already present", len(records) - len(pending), len(records))
    else:
        pending = records

    job_tracker.enter_phase(job_id, "render")
    rows = [r.to_dict() for r in pending]
    total = len(records)
    every = max(1, total // _PROGRESS_STEPS)
    jobs = max(1, min(config.jobs, len(rows) or 1))
    try:
        if jobs == 1:
            _init_worker(catalog, str(root), mode.value, config.tolerance)
            for row in rows:
                _account(job_id, row, _render(row), total, every)
        else:
            pool = ProcessPoolExecutor(
                max_workers=jobs,
                initializer=_init_worker,
                initargs=(catalog, str(root), mode.value, config.tolerance),
            )
            try:
                chunk = max(1, len(rows) // (jobs * 8))
                for row, failure in zip(rows, pool.map(_render, rows, chunksize=chunk)):
                    _account(job_id, row, failure, total, every)
            except BaseException:
                pool.shutdown(wait=False, cancel_futures=True)
                raise
            pool.shutdown(wait=True)
    except BaseException:
        job_tracker.finish_job(job_id, JobStatus.INTERRUPTED)
        raise

    failed = job_tracker.failures(job_id)
    timings = job_tracker.finish_job(job_id, JobStatus.PARTIAL if failed else JobStatus.COMPLETED)
    job = job_tracker.get_job(job_id)
    summary = GenerationSummary(
        generated=job.generated,
        failed=len(failed),
        skipped=job.skipped,
        wall_time=time.monotonic() - started,
        failures=failed,
    )
    logger.info("Generation finished: generated=%d failed=%d skipped=%d in %.1fs (render %.1fs)",
                summary.generated, summary.failed, summary.skipped, summary.wall_time,
                timings.get("render", 0.0))
    return summary
