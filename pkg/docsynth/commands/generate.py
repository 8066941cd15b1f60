"""`generate`: plan the manifest and render every (input, ground truth) pair."""

import json

import click

from docsynth.commands import jobs_option
from docsynth.models.manifest import GenerationConfig
from docsynth.services.generator import run


@click.command("generate")
@click.option("--contents", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--backgrounds", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--per-content", "-k", "per_content", type=int, default=None,
              help="Backgrounds drawn per content (without replacement).")
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=None)
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None)
@click.option("--mode", type=click.Choice(["mixed", "source"]), default="mixed")
@click.option("--augment", is_flag=True, help="Apply a seeded dihedral transform per sample.")
@click.option("--resume", is_flag=True, help="Skip samples whose outputs already exist.")
@jobs_option
@click.pass_obj
def generate_cmd(obj: dict, contents: str, backgrounds: str, per_content: int | None, seed: int | None,
                 out_dir: str | None, mode: str, augment: bool, resume: bool) -> int:
    """Render the dataset; exit 2 when some samples failed."""
    settings = obj["SETTINGS"]
    config = GenerationConfig(
        contents_path=contents,
        backgrounds_path=backgrounds,
        output_root=out_dir or settings.output_root,
        per_content=per_content if per_content is not None else settings.per_content,
        global_seed=seed if seed is not None else settings.seed,
        jobs=settings.jobs,
        clone_mode=mode,
        augment=augment,
        resume=resume,
        tolerance=settings.cg_tolerance,
    )
    summary = run(config)
    click.echo(json.dumps({k: v for k, v in summary.to_dict().items() if k != "failures"}))
    if summary.failed:
        for f in summary.failures:
            click.echo(f"sample {f.sample_id} failed ({f.stage}): {f.message}", err=True)
        return 2
    return 0
