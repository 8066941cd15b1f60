"""Per-tag sample counts over a manifest."""

from dataclasses import dataclass, field

from docsynth.models.catalog import DEGRADATION_TAGS, PAGE_STYLE_TAGS, BackgroundAsset
from docsynth.models.manifest import ManifestRecord
from docsynth.services.catalog_store import CatalogError

UNTAGGED = "untagged"


@dataclass
class TagCounts:
    samples: int = 0
    page_styles: dict[str, int] = field(default_factory=dict)
    degradations: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "samples": self.samples,
            "page_styles": dict(self.page_styles),
            "degradations": dict(self.degradations),
        }

    def render(self) -> str:
        width = max(len(t) for t in [*self.page_styles, *self.degradations, "samples"])
        lines = [f"{'samples':<{width}}  {self.samples}", "", "Page styles"]
        lines += [f"{tag:<{width}}  {n}" for tag, n in self.page_styles.items()]
        lines += ["", "Degradation effects"]
        lines += [f"{tag:<{width}}  {n}" for tag, n in self.degradations.items()]
        return "\n".join(lines) + "\n"


def stats(manifest: list[ManifestRecord], backgrounds: list[BackgroundAsset]) -> TagCounts:
    """Count samples per page style and per degradation, in vocabulary order.

    Backgrounds without a page style are counted under "untagged" so that the
    page-style counts always sum to the manifest length.
    """
    by_id = {b.background_id: b for b in backgrounds}
    page_counts = dict.fromkeys(PAGE_STYLE_TAGS, 0)
    degradation_counts = dict.fromkeys(DEGRADATION_TAGS, 0)
    untagged = 0

    for record in manifest:
        bg = by_id.get(record.background_id)
        if bg is None:
            raise CatalogError(f"sample {record.sample_id} refers to unknown background {record.background_id!r}")
        if bg.page_style is None:
            untagged += 1
        elif bg.page_style in page_counts:
            page_counts[bg.page_style] += 1
        else:
            raise CatalogError(f"background {bg.background_id} has unknown page style {bg.page_style!r}")
        for tag in bg.degradations:
            if tag not in degradation_counts:
                raise CatalogError(f"background {bg.background_id} has unknown degradation {tag!r}")
            degradation_counts[tag] += 1

    if untagged:
        page_counts[UNTAGGED] = untagged
    return TagCounts(samples=len(manifest), page_styles=page_counts, degradations=degradation_counts)
