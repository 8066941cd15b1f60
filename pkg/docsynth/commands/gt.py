"""`gt`: adaptive-threshold ground truths for clean documents."""

import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click

from docsynth.commands import jobs_option
from docsynth.models.errors import ParameterError
from docsynth.services.patching import expand_pattern
from docsynth.services.thresholding import AdaptiveParams, extract_ground_truth_file

logger = logging.getLogger(__name__)


@click.command("gt")
@click.argument("pattern")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None,
              help="Output directory (default: <output root>/gt).")
@click.option("--window", type=int, default=None, help="Odd local window side in pixels.")
@click.option("--offset", type=float, default=None, help="Intensity offset below the local mean.")
@click.option("--method", type=click.Choice(["mean", "gaussian"]), default=None)
@click.option("--no-despeckle", is_flag=True, help="Keep isolated ink pixels.")
@jobs_option
@click.pass_obj
def gt_cmd(obj: dict, pattern: str, out_dir: str | None, window: int | None,
           offset: float | None, method: str | None, no_despeckle: bool) -> int:
    """Write a ground-truth mask for every PNG matching PATTERN."""
    settings = obj["SETTINGS"]
    params = AdaptiveParams(
        window=window if window is not None else settings.gt_window,
        offset=offset if offset is not None else settings.gt_offset,
        method=method or settings.gt_method,
    )
    paths = expand_pattern(pattern)
    if not paths:
        raise ParameterError(f"no files match {pattern!r}")
    out = Path(out_dir) if out_dir else Path(settings.output_root) / "gt"

    with ThreadPoolExecutor(max_workers=settings.jobs) as pool:
        counts = list(pool.map(
            lambda p: extract_ground_truth_file(p, out / f"{p.stem}.png", params, clean=not no_despeckle),
            paths,
        ))
    logger.info("Wrote %d ground truths to %s (%d ink pixels)", len(paths), out, sum(counts))
    return 0
