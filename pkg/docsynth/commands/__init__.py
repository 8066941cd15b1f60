import click


def _override_jobs(ctx: click.Context, _param: click.Parameter, value: int | None) -> None:
    if value is not None:
        ctx.find_object(dict)["SETTINGS"].jobs = value


jobs_option = click.option(
    "--jobs", type=click.IntRange(min=1), default=None, expose_value=False, callback=_override_jobs,
    help="Parallel workers for this command (overrides the global --jobs).",
)
