import pytest

from docsynth.models.catalog import DEGRADATION_TAGS, PAGE_STYLE_TAGS, AssetCatalog, BackgroundAsset, ContentAsset
from docsynth.models.manifest import GenerationConfig
from docsynth.services.catalog_store import CatalogError
from docsynth.services.dataset_stats import stats
from docsynth.services.planner import plan

BACKGROUNDS = [
    BackgroundAsset("b0", "b0.png", "grid_lines", ["liquid_stains"]),
    BackgroundAsset("b1", "b1.png", "plain", ["liquid_stains", "poor_contrast"]),
    BackgroundAsset("b2", "b2.png", None, ["shadow_gradients"]),
]


def manifest(k: int = 3, n_contents: int = 4):
    catalog = AssetCatalog(
        contents=[ContentAsset(f"c{i}", "p.png", "g.png") for i in range(n_contents)],
        backgrounds=BACKGROUNDS,
    )
    return plan(GenerationConfig("c", "b", "out", per_content=k), catalog)


def test_every_content_uses_every_background():
    counts = stats(manifest(), BACKGROUNDS)
    assert counts.samples == 12
    assert counts.page_styles["grid_lines"] == 4
    assert counts.page_styles["plain"] == 4
    assert counts.page_styles["untagged"] == 4
    assert sum(counts.page_styles.values()) == 12
    assert counts.degradations["liquid_stains"] == 8
    assert counts.degradations["poor_contrast"] == 4
    assert counts.degradations["shadow_gradients"] == 4


def test_vocabulary_order():
    counts = stats(manifest(), BACKGROUNDS)
    assert list(counts.page_styles) == [*PAGE_STYLE_TAGS, "untagged"]
    assert list(counts.degradations) == DEGRADATION_TAGS


def test_empty_manifest():
    counts = stats([], BACKGROUNDS)
    assert counts.samples == 0
    assert set(counts.page_styles.values()) == {0}
    assert "untagged" not in counts.page_styles


def test_unknown_background():
    with pytest.raises(CatalogError):
        stats(manifest(), BACKGROUNDS[:2])


def test_render_and_dict():
    counts = stats(manifest(), BACKGROUNDS)
    text = counts.render()
    assert text.splitlines()[0].split() == ["samples", "12"]
    assert "Degradation effects" in text
    assert counts.to_dict()["degradations"]["liquid_stains"] == 8
