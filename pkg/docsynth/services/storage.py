"""Local persistence helpers: atomic file writes and JSON Lines documents.

Every writer goes through a temp file in the destination directory followed by
os.replace, so an interrupted run never leaves a truncated file behind.
"""

import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Callable, Iterable, IO

from docsynth.models.errors import DocsynthError

logger = logging.getLogger(__name__)


class JsonLinesError(DocsynthError):
    """Raised when a JSON Lines document cannot be parsed."""


def atomic_write(path: str | Path, writer: Callable[[IO[bytes]], None]) -> None:
    """Call writer with a temp file beside path, then rename it into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            writer(fh)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except FileNotFoundError:
            pass
        raise


def atomic_write_text(path: str | Path, text: str) -> None:
    data = text.encode("utf-8")
    atomic_write(path, lambda fh: fh.write(data))


def write_jsonl(path: str | Path, records: Iterable[dict]) -> int:
    """Write one compact JSON object per line. Returns the number of lines."""
    lines = [json.dumps(r, ensure_ascii=False, separators=(", ", ": ")) for r in records]
    atomic_write_text(path, "".join(line + "\n" for line in lines))
    return len(lines)


def read_jsonl(path: str | Path) -> list[dict]:
    """Parse a JSON Lines file, skipping blank lines."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise JsonLinesError(f"{path}: file not found") from None

    records = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            value = json.loads(line)
        except json.JSONDecodeError as e:
            raise JsonLinesError(f"{path}:{lineno}: invalid JSON ({e.msg})") from None
        if not isinstance(value, dict):
            raise JsonLinesError(f"{path}:{lineno}: expected a JSON object")
        records.append(value)
    logger.debug("Read %d records from %s", len(records), path)
    return records


def remove_stale_temp_files(root: str | Path) -> int:
    """Delete temp files left by a killed writer. Returns how many were removed."""
    removed = 0
    for tmp in Path(root).rglob(".*.tmp"):
        try:
            tmp.unlink()
            removed += 1
        except OSError:
            logger.warning("Could not remove stale temp file %s", tmp)
    if removed:
        logger.info("Removed %d stale temp files under %s", removed, root)
    return removed
