import numpy as np
import pytest

from docsynth.models.errors import DimensionMismatchError, ParameterError
from docsynth.models.raster import BinaryMask, RasterImage, Transform
from docsynth.services import raster_io
from docsynth.services.catalog_store import load_contents
from docsynth.services.patching import (
    PatchSpec,
    augment_set,
    build_content_assets,
    crop_aligned,
    crop_offsets,
    crop_patches,
    patch_file_name,
    patch_files,
)
from docsynth.services.raster_ops import apply_transform


def test_offsets_row_major():
    assert crop_offsets(960, 480, PatchSpec(480, 240)) == [(0, 0), (240, 0), (480, 0)]
    assert crop_offsets(100, 70, PatchSpec(32, 32)) == [(0, 0), (32, 0), (64, 0), (0, 32), (32, 32), (64, 32)]


def test_exact_fit_gives_one_patch():
    result = crop_patches(RasterImage(np.ones((480, 480))), PatchSpec())
    assert len(result) == 1
    assert not result.too_small


def test_too_small_is_empty_not_error(caplog):
    result = crop_patches(RasterImage(np.ones((479, 600))), PatchSpec())
    assert len(result) == 0
    assert result.too_small
    assert "smaller than patch size" in caplog.text


def test_patch_contents(rng):
    img = RasterImage(rng.random((10, 12)))
    result = crop_patches(img, PatchSpec(4, 3))
    assert result.offsets() == [(x, y) for y in (0, 3, 6) for x in (0, 3, 6)]
    for (x, y), patch in result:
        assert np.array_equal(patch.data, img.data[y:y + 4, x:x + 4])


def test_spec_validation():
    with pytest.raises(ParameterError):
        PatchSpec(size=0)
    with pytest.raises(ParameterError):
        PatchSpec(stride=0)


class TestAugment:
    def test_eight_variants_starting_with_input(self):
        patch = RasterImage(np.arange(16, dtype=float).reshape(4, 4) / 16)
        variants = augment_set(patch)
        assert len(variants) == 8
        assert variants[0].equals(patch)
        assert len({v.data.tobytes() for v in variants}) == 8

    def test_symmetric_patch_repeats(self):
        flat = RasterImage(np.full((3, 3), 0.5))
        assert all(v.equals(flat) for v in augment_set(flat))

    def test_non_square_rejected(self):
        with pytest.raises(ParameterError):
            augment_set(RasterImage(np.zeros((3, 4))))


class TestAligned:
    def test_masks_follow_patches(self, rng):
        data = rng.random((12, 12))
        pairs = crop_aligned(RasterImage(data), BinaryMask(data < 0.4), PatchSpec(6, 3))
        assert len(pairs) == 9
        for pair in pairs:
            for t in Transform.all():
                moved = pair.transformed(t)
                assert np.array_equal(moved.gt.data, moved.patch.data < 0.4)

    def test_size_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            crop_aligned(RasterImage(np.zeros((8, 8))), BinaryMask.empty(8, 9), PatchSpec(4, 4))


def test_file_name():
    assert patch_file_name("page01", 480, 960, 5) == "page01_x480_y960_t5.png"


def _document(tmp_path):
    page = np.ones((64, 100))
    page[10:13, 4:28] = 0.1
    raster_io.save_image(tmp_path / "docs" / "doc.png", RasterImage(page))
    return page


def test_patch_files_with_augmentation(tmp_path):
    page = _document(tmp_path)
    written = patch_files(str(tmp_path / "docs" / "*.png"), tmp_path / "out", PatchSpec(32, 32), augment=True)
    assert written == 6 * 8
    rotated = raster_io.load_image(tmp_path / "out" / "doc_x0_y0_t1.png")
    expected = apply_transform(RasterImage(page[:32, :32]), Transform.from_index(1))
    assert np.array_equal(rotated.to_uint8(), expected.to_uint8())


def test_patch_files_no_match(tmp_path):
    with pytest.raises(ParameterError):
        patch_files(str(tmp_path / "*.png"), tmp_path / "out", PatchSpec())


class TestContentAssets:
    def test_catalog_and_ground_truth(self, tmp_path):
        _document(tmp_path)
        assets = build_content_assets(str(tmp_path / "docs" / "*.png"), tmp_path / "set", PatchSpec(32, 32))
        assert [a.content_id for a in assets] == [
            f"doc_x{x}_y{y}_t0" for y in (0, 32) for x in (0, 32, 64)
        ]
        stored = load_contents(tmp_path / "set" / "contents.jsonl")
        assert [a.to_dict() for a in stored] == [a.to_dict() for a in assets]
        gt = raster_io.load_mask(tmp_path / "set" / "content_gt" / "doc_x0_y0_t0.png", strict=True)
        expected = np.zeros((32, 32), dtype=bool)
        expected[10:13, 4:28] = True
        assert np.array_equal(gt.data, expected)

    def test_skip_blank_with_augmentation(self, tmp_path):
        _document(tmp_path)
        assets = build_content_assets(
            str(tmp_path / "docs" / "*.png"), tmp_path / "set", PatchSpec(32, 32), augment=True, skip_blank=True,
        )
        assert [a.content_id for a in assets] == [f"doc_x0_y0_t{t}" for t in range(8)]
        for a in assets:
            patch = raster_io.load_image(tmp_path / "set" / a.patch)
            gt = raster_io.load_mask(tmp_path / "set" / a.gt)
            assert np.array_equal(gt.data, patch.data < 0.5)

    def test_duplicate_stems_rejected(self, tmp_path):
        for sub in ("a", "b"):
            raster_io.save_image(tmp_path / sub / "page.png", RasterImage(np.ones((40, 40))))
        with pytest.raises(ParameterError):
            build_content_assets(str(tmp_path / "**" / "*.png"), tmp_path / "set", PatchSpec(32, 32))
        assert not (tmp_path / "set").exists()
