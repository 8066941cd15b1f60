"""`split`: train/val/test lists (and optional training subset) from a manifest."""

from pathlib import Path

import click

from docsynth.services.planner import read_manifest
from docsynth.services.splits import DEFAULT_RATIOS, assign_splits, subsample, write_splits


def _ratios(ctx, param, value: str) -> tuple[float, float, float]:
    try:
        parts = tuple(float(v) for v in value.split(","))
    except ValueError:
        raise click.BadParameter("expected three comma-separated numbers") from None
    if len(parts) != 3:
        raise click.BadParameter("expected three comma-separated numbers")
    return parts


@click.command("split")
@click.option("--manifest", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=None)
@click.option("--ratios", default=",".join(str(r) for r in DEFAULT_RATIOS), callback=_ratios,
              show_default=True, help="train,val,test fractions.")
@click.option("--limit", type=click.IntRange(min=1), default=None,
              help="Draw this many samples before splitting.")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None,
              help="Dataset root (default: the manifest's directory).")
@click.pass_obj
def split_cmd(obj: dict, manifest: str, seed: int | None, ratios: tuple[float, float, float],
              limit: int | None, out_dir: str | None) -> int:
    """Write <root>/splits/{train,val,test}.txt."""
    seed = seed if seed is not None else obj["SETTINGS"].seed
    records = read_manifest(manifest)
    if limit is not None:
        records = subsample(records, limit, seed)
    splits = assign_splits(records, ratios, seed)
    write_splits(out_dir or Path(manifest).parent, splits)
    click.echo(" ".join(f"{name}={len(ids)}" for name, ids in splits.items()))
    return 0
