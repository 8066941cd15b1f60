"""`eval`: DIBCO-style scores of predicted masks against ground truths."""

import click

from docsynth.commands import jobs_option
from docsynth.services.evaluation import evaluate_corpus, render_table, write_report


@click.command("eval")
@click.option("--pred", "pred_dir", type=click.Path(exists=True, file_okay=False), required=True)
@click.option("--gt", "gt_dir", type=click.Path(exists=True, file_okay=False), required=True)
@click.option("--prob", "prob_dir", type=click.Path(exists=True, file_okay=False), default=None,
              help="Probability maps (level/255 = ink probability) for BCE.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True,
              help="Report base path; writes <out>.txt and <out>.jsonl.")
@click.option("--name", default=None, help="Column name (default: prediction directory name).")
@jobs_option
@click.pass_obj
def eval_cmd(obj: dict, pred_dir: str, gt_dir: str, prob_dir: str | None, out_path: str, name: str | None) -> int:
    """Score every prediction whose stem has a ground truth."""
    report = evaluate_corpus(pred_dir, gt_dir, prob_dir=prob_dir, name=name, jobs=obj["SETTINGS"].jobs)
    write_report(out_path, report)
    click.echo(render_table([report]), nl=False)
    return 0
