"""Score a directory of predicted masks against a directory of ground truths."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from docsynth.models.errors import DocsynthError
from docsynth.models.metric_report import CorpusReport, ImageScore, ProbabilityMap
from docsynth.services import raster_io
from docsynth.services.metrics import PSEUDO_F_VARIANT, evaluate
from docsynth.services.raster_ops import to_grayscale
from docsynth.services.storage import atomic_write_text, write_jsonl

logger = logging.getLogger(__name__)


class EvaluationError(DocsynthError):
    """Raised when prediction and ground-truth directories cannot be paired."""


def _stems(directory: Path) -> dict[str, Path]:
    if not directory.is_dir():
        raise EvaluationError(f"{directory}: not a directory")
    return {p.stem: p for p in sorted(directory.glob("*.png")) if p.is_file()}


def load_probability_map(path: str | Path) -> ProbabilityMap:
    """8-bit PNG where level / 255 is the ink probability."""
    img = to_grayscale(raster_io.load_image(path))
    return ProbabilityMap(img.data)


def _score(stem: str, pred_path: Path, gt_path: Path, prob_path: Path | None) -> ImageScore:
    pred = raster_io.load_mask(pred_path)
    gt = raster_io.load_mask(gt_path)
    prob = load_probability_map(prob_path) if prob_path is not None else None
    return ImageScore(stem=stem, report=evaluate(pred, gt, prob))


def _mean(values: list[float]) -> float | None:
    return math.fsum(values) / len(values) if values else None


def evaluate_corpus(
    pred_dir: str | Path,
    gt_dir: str | Path,
    prob_dir: str | Path | None = None,
    name: str | None = None,
    jobs: int = 1,
) -> CorpusReport:
    """Per-image scores in stem order plus corpus means.

    Infinite PSNRs (perfect predictions) are left out of the PSNR mean and
    counted in psnr_infinite instead.
    """
    pred_dir, gt_dir = Path(pred_dir), Path(gt_dir)
    preds, gts = _stems(pred_dir), _stems(gt_dir)
    matched = sorted(preds.keys() & gts.keys())
    unmatched_pred = sorted(preds.keys() - gts.keys())
    unmatched_gt = sorted(gts.keys() - preds.keys())
    if not matched:
        raise EvaluationError(
            f"no common file stems between predictions {pred_dir} ({len(preds)} files) "
            f"and ground truths {gt_dir} ({len(gts)} files)"
        )
    if unmatched_pred:
        logger.warning("%d predictions have no ground truth: %s", len(unmatched_pred), ", ".join(unmatched_pred))
    if unmatched_gt:
        logger.warning("%d ground truths have no prediction: %s", len(unmatched_gt), ", ".join(unmatched_gt))

    probs: dict[str, Path] = {}
    if prob_dir is not None:
        probs = _stems(Path(prob_dir))
        missing = [s for s in matched if s not in probs]
        if missing:
            raise EvaluationError(f"{prob_dir}: no probability map for {', '.join(missing)}")

    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        images = list(pool.map(
            lambda s: _score(s, preds[s], gts[s], probs.get(s) if prob_dir is not None else None),
            matched,
        ))

    finite_psnr = [i.report.psnr for i in images if not math.isinf(i.report.psnr)]
    bces = [i.report.bce for i in images if i.report.bce is not None]
    report = CorpusReport(
        name=name or pred_dir.name,
        images=images,
        mean_f_score=_mean([i.report.f_score for i in images]),
        mean_pf_score=_mean([i.report.pf_score for i in images]),
        mean_psnr=_mean(finite_psnr),
        mean_bce=_mean(bces),
        psnr_infinite=len(images) - len(finite_psnr),
        unmatched_pred=unmatched_pred,
        unmatched_gt=unmatched_gt,
    )
    logger.info("Evaluated %d images: F=%.4f PF=%.4f", len(images), report.mean_f_score, report.mean_pf_score)
    return report


# -- Reports ------------------------------------------------------------------


def _fmt(value: float | None, digits: int) -> str:
    return "n/a" if value is None else f"{value:.{digits}f}"


def render_table(reports: list[CorpusReport]) -> str:
    """One row per metric, one column per prediction set."""
    rows = [
        ("F-score", [_fmt(r.mean_f_score, 4) for r in reports]),
        ("PF-score", [_fmt(r.mean_pf_score, 4) for r in reports]),
        ("PSNR", [_fmt(r.mean_psnr, 2) for r in reports]),
    ]
    if any(r.mean_bce is not None for r in reports):
        rows.append(("BCE", [_fmt(r.mean_bce, 4) for r in reports]))

    header = ["Metric", *[r.name for r in reports]]
    widths = [max(len(header[0]), *(len(label) for label, _ in rows))]
    for col, r in enumerate(reports):
        widths.append(max(len(r.name), *(len(cells[col]) for _, cells in rows)))

    def line(cells: list[str]) -> str:
        first = cells[0].ljust(widths[0])
        rest = [c.rjust(w) for c, w in zip(cells[1:], widths[1:])]
        return "  ".join([first, *rest]).rstrip()

    out = [f"# {PSEUDO_F_VARIANT}"]
    for r in reports:
        out.append(f"# {r.name}: {len(r.images)} images, {r.psnr_infinite} infinite PSNR excluded from mean")
    out.append(line(header))
    out.extend(line([label, *cells]) for label, cells in rows)
    return "\n".join(out) + "\n"


def write_report(out: str | Path, report: CorpusReport) -> tuple[Path, Path]:
    """Write <out>.txt (metric table) and <out>.jsonl (per-image records)."""
    out = Path(out)
    base = out.with_suffix("") if out.suffix in (".txt", ".jsonl") else out
    text_path = base.with_name(base.name + ".txt")
    jsonl_path = base.with_name(base.name + ".jsonl")
    atomic_write_text(text_path, render_table([report]))
    write_jsonl(jsonl_path, (i.to_dict() for i in report.images))
    return text_path, jsonl_path
