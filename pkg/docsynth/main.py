import logging
import signal
import sys
import threading

import click

from docsynth import __version__
from docsynth.config import Settings
from docsynth.models.errors import DocsynthError

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_PARTIAL = 2
EXIT_INTERRUPTED = 130


def create_cli() -> click.Group:
    """CLI factory: root group with every subcommand registered."""

    @click.group(name="docsynth", context_settings={"help_option_names": ["-h", "--help"]})
    @click.version_option(__version__, prog_name="docsynth")
    @click.option("-v", "--verbose", count=True, help="More logging (-v for DEBUG).")
    @click.option("-q", "--quiet", is_flag=True, help="Only warnings and errors.")
    @click.option("--jobs", type=click.IntRange(min=1), default=None,
                  help="Parallel workers (default: DOCSYNTH_JOBS or CPU count).")
    @click.pass_context
    def cli(ctx: click.Context, verbose: int, quiet: bool, jobs: int | None):
        """Synthesize degraded handwritten-document datasets and score binarizers."""
        try:
            settings = Settings()
        except ValueError as e:
            raise click.UsageError(str(e)) from None
        _setup_logging(settings, verbose, quiet)
        if jobs is not None:
            settings.jobs = jobs
        ctx.obj = {"SETTINGS": settings}

    from docsynth.commands.gt import gt_cmd
    from docsynth.commands.patch import patch_cmd
    from docsynth.commands.background import background_cmd
    from docsynth.commands.generate import generate_cmd
    from docsynth.commands.clone import clone_cmd
    from docsynth.commands.evaluate import eval_cmd
    from docsynth.commands.stats import stats_cmd
    from docsynth.commands.split import split_cmd
    from docsynth.commands.demo import demo_cmd

    for command in (gt_cmd, patch_cmd, background_cmd, generate_cmd, clone_cmd,
                    eval_cmd, stats_cmd, split_cmd, demo_cmd):
        cli.add_command(command)
    return cli


class _KeyValueFormatter(logging.Formatter):
    """One structured line per record for batch environments."""

    def format(self, record: logging.LogRecord) -> str:
        message = record.getMessage().replace('"', "'")
        line = (
            f'ts={self.formatTime(record, "%Y-%m-%dT%H:%M:%S")} level={record.levelname} '
            f'logger={record.name} msg="{message}"'
        )
        if record.exc_info:
            line += ' exc="' + self.formatException(record.exc_info).replace("\n", " | ") + '"'
        return line


def _setup_logging(settings: Settings, verbose: int = 0, quiet: bool = False) -> None:
    """Configure the root logger on stderr: readable locally, key=value in batch."""
    if verbose:
        level = logging.DEBUG
    elif quiet:
        level = logging.WARNING
    else:
        level = logging.getLevelName(settings.log_level)
        if not isinstance(level, int):
            level = logging.INFO

    handler = logging.StreamHandler(sys.stderr)
    if settings.environment == "batch":
        handler.setFormatter(_KeyValueFormatter())
    else:
        handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
    root = logging.getLogger()
    for old in list(root.handlers):
        root.removeHandler(old)
    root.addHandler(handler)
    root.setLevel(level)


def _setup_sigterm_handler() -> None:
    """Turn SIGTERM into KeyboardInterrupt so runs stop like Ctrl-C.

    Atomic writes mean nothing partial is left behind; --resume continues.
    """
    def _on_sigterm(signum, frame):
        logger = logging.getLogger(__name__)
        from docsynth.services.job_tracker import get_running_jobs

        for job in get_running_jobs():
            logger.info("SIGTERM received, run %s stopped at %d/%d samples (%d failed)",
                        job.job_id, job.done, job.total, len(job.failures))
        raise KeyboardInterrupt

    if threading.current_thread() is threading.main_thread():
        signal.signal(signal.SIGTERM, _on_sigterm)


def main(argv: list[str] | None = None) -> int:
    """Run the CLI and map outcomes to exit codes."""
    logger = logging.getLogger(__name__)
    cli = create_cli()
    _setup_sigterm_handler()
    try:
        rv = cli.main(args=argv, prog_name="docsynth", standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.ClickException as e:
        e.show()
        return EXIT_INVALID
    except (click.Abort, KeyboardInterrupt):
        logger.warning("Interrupted")
        return EXIT_INTERRUPTED
    except DocsynthError as e:
        logger.error("%s", e)
        return EXIT_INVALID
    return rv if isinstance(rv, int) else EXIT_OK


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
