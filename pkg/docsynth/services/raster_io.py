"""PNG load/save for images and ground-truth masks.

PNG is the only supported format: 8-bit grayscale or 8-bit RGB for images,
single-channel {0, 255} for masks. Writes are atomic.
"""

import logging
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from docsynth.models.errors import DocsynthError
from docsynth.models.raster import BinaryMask, RasterImage
from docsynth.services.raster_ops import to_grayscale
from docsynth.services.storage import atomic_write

logger = logging.getLogger(__name__)

MAX_SIDE = 65_535
MAX_PIXELS = 2**30

# Pillow's own decompression-bomb guard would fire before ours.
Image.MAX_IMAGE_PIXELS = None


class ImageNotFoundError(DocsynthError):
    """Raised when an image path does not exist."""


class ImageFormatError(DocsynthError):
    """Raised when a file is not a supported 8-bit PNG."""


class ImageDimensionError(DocsynthError):
    """Raised when an image header declares dimensions beyond the supported range."""


def _open_png(path: str | Path) -> np.ndarray:
    path = Path(path)
    if not path.is_file():
        raise ImageNotFoundError(f"{path}: no such file")
    if path.stat().st_size == 0:
        raise ImageFormatError(f"{path}: empty file")
    try:
        with Image.open(path) as im:
            if im.format != "PNG":
                raise ImageFormatError(f"{path}: unsupported format {im.format}, expected PNG")
            width, height = im.size
            if width > MAX_SIDE or height > MAX_SIDE or width * height > MAX_PIXELS:
                raise ImageDimensionError(f"{path}: {width}x{height} exceeds supported dimensions")
            mode = im.mode
            if mode in ("1", "LA"):
                im = im.convert("L")
            elif mode in ("P", "RGBA"):
                im = im.convert("RGB")
            elif mode not in ("L", "RGB"):
                raise ImageFormatError(f"{path}: unsupported pixel mode {mode}")
            return np.asarray(im, dtype=np.uint8)
    except (UnidentifiedImageError, OSError, SyntaxError) as e:
        raise ImageFormatError(f"{path}: cannot decode PNG ({e})") from None


def _save_png(path: str | Path, levels: np.ndarray) -> None:
    im = Image.fromarray(levels)
    atomic_write(path, lambda fh: im.save(fh, format="PNG", optimize=False))


def load_image(path: str | Path) -> RasterImage:
    return RasterImage.from_uint8(_open_png(path))


def save_image(path: str | Path, img: RasterImage) -> None:
    _save_png(path, img.to_uint8())


def load_mask(path: str | Path, strict: bool = False) -> BinaryMask:
    """Load a mask; color inputs are reduced to luma, dark pixels are ink.

    With strict=True the file must already be a {0, 255} single-channel image.
    """
    levels = _open_png(path)
    if levels.ndim == 3:
        if strict:
            raise ImageFormatError(f"{path}: ground truth must be single-channel")
        levels = to_grayscale(RasterImage.from_uint8(levels)).to_uint8()
    if strict and not np.isin(levels, (0, 255)).all():
        raise ImageFormatError(f"{path}: ground truth must contain only levels 0 and 255")
    return BinaryMask.from_uint8(levels)


def save_mask(path: str | Path, mask: BinaryMask) -> None:
    _save_png(path, mask.to_uint8())
