"""`patch`: crop images into fixed-size patches, optionally with ground truths."""

import click

from docsynth.commands import jobs_option
from docsynth.services.patching import PatchSpec, build_content_assets, patch_files
from docsynth.services.thresholding import AdaptiveParams


@click.command("patch")
@click.argument("pattern")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None,
              help="Output directory (default: <output root>/patches).")
@click.option("--size", type=int, default=None, help="Square patch side in pixels.")
@click.option("--stride", type=int, default=None, help="Grid step in pixels.")
@click.option("--augment", is_flag=True, help="Also write the 7 rotated/flipped variants.")
@click.option("--with-gt", is_flag=True,
              help="Treat inputs as clean documents: extract ground truths and write contents.jsonl.")
@click.option("--skip-blank", is_flag=True, help="With --with-gt, drop patches without ink.")
@jobs_option
@click.pass_obj
def patch_cmd(obj: dict, pattern: str, out_dir: str | None, size: int | None, stride: int | None,
              augment: bool, with_gt: bool, skip_blank: bool) -> int:
    """Crop every PNG matching PATTERN into <stem>_x<ox>_y<oy>_t<t>.png patches."""
    settings = obj["SETTINGS"]
    spec = PatchSpec(
        size=size if size is not None else settings.patch_size,
        stride=stride if stride is not None else (size if size is not None else settings.patch_stride),
    )
    out = out_dir or f"{settings.output_root}/patches"
    if with_gt:
        params = AdaptiveParams(settings.gt_window, settings.gt_offset, settings.gt_method)
        assets = build_content_assets(pattern, out, spec, params, augment, skip_blank, jobs=settings.jobs)
        click.echo(f"{len(assets)} content patches")
    else:
        if skip_blank:
            raise click.UsageError("--skip-blank needs --with-gt")
        written = patch_files(pattern, out, spec, augment, jobs=settings.jobs)
        click.echo(f"{written} patches")
    return 0
