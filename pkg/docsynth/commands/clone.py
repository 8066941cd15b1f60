"""`clone`: one-off seamless clone of a source patch into a target patch."""

import click

from docsynth.models.errors import DimensionMismatchError
from docsynth.services import raster_io
from docsynth.services.poisson_clone import CloneRequest, full_patch_region, seamless_clone
from docsynth.services.raster_ops import match_channels


@click.command("clone")
@click.option("--source", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--target", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
@click.option("--mode", type=click.Choice(["mixed", "source"]), default="mixed")
@click.pass_obj
def clone_cmd(obj: dict, source: str, target: str, out_path: str, mode: str) -> int:
    """Blend the whole source into the target, keeping the target's 1-pixel frame."""
    settings = obj["SETTINGS"]
    tgt = raster_io.load_image(target)
    src = match_channels(raster_io.load_image(source), tgt.channels)
    if src.shape != tgt.shape:
        raise DimensionMismatchError(f"source {src.shape} and target {tgt.shape} must be the same size")
    req = CloneRequest(source=src, target=tgt, region=full_patch_region(tgt.width, tgt.height), mode=mode)
    raster_io.save_image(out_path, seamless_clone(req, tol=settings.cg_tolerance))
    return 0
