import click

from docsynth.commands import jobs_option
from docsynth.services.demo_assets import build_demo_assets


@click.command("demo")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--docs", type=click.IntRange(min=1), default=2, show_default=True,
              help="Full-length documents to draw (6 content patches each).")
@jobs_option
@click.pass_obj
def demo_cmd(obj: dict, out_dir: str, seed: int, docs: int) -> int:
    """Write a small procedural asset set for trying the pipeline."""
    assets = build_demo_assets(out_dir, seed=seed, n_docs=docs, jobs=obj["SETTINGS"].jobs)
    click.echo(f"contents={assets.contents} backgrounds={assets.backgrounds}")
    return 0
