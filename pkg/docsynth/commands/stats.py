import json

import click

from docsynth.services.catalog_store import load_backgrounds
from docsynth.services.dataset_stats import stats
from docsynth.services.planner import read_manifest


@click.command("stats")
@click.option("--manifest", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--backgrounds", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--json", "as_json", is_flag=True, help="Print JSON instead of a table.")
def stats_cmd(manifest: str, backgrounds: str, as_json: bool) -> int:
    """Sample counts per page style and degradation effect."""
    counts = stats(read_manifest(manifest), load_backgrounds(backgrounds, check_files=False))
    if as_json:
        click.echo(json.dumps(counts.to_dict()))
    else:
        click.echo(counts.render(), nl=False)
    return 0
