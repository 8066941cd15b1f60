"""`background`: compose page-style and degradation patches into backgrounds."""

import click

from docsynth.services.backgrounds import generate_backgrounds


@click.command("background")
@click.option("--pages", type=click.Path(exists=True, dir_okay=False), required=True,
              help="Catalog of page-style patches (JSON Lines).")
@click.option("--degradations", type=click.Path(exists=True, dir_okay=False), required=True,
              help="Catalog of degradation patches (JSON Lines).")
@click.option("--count", type=click.IntRange(min=1), required=True)
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=None)
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None)
@click.option("--mode", type=click.Choice(["mixed", "source"]), default="mixed")
@click.pass_obj
def background_cmd(obj: dict, pages: str, degradations: str, count: int, seed: int | None,
                   out_dir: str | None, mode: str) -> int:
    """Write --count backgrounds and backgrounds.jsonl under --out."""
    settings = obj["SETTINGS"]
    assets = generate_backgrounds(
        pages, degradations, count,
        seed=seed if seed is not None else settings.seed,
        out_dir=out_dir or settings.output_root,
        mode=mode,
        tol=settings.cg_tolerance,
    )
    click.echo(f"{len(assets)} backgrounds")
    return 0
