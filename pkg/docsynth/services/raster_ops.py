import numpy as np

from docsynth.models.errors import ParameterError
from docsynth.models.raster import BinaryMask, RasterImage, Transform

LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])


def to_grayscale(img: RasterImage) -> RasterImage:
    """Rec. 601 luma; single-channel images are returned unchanged."""
    if img.channels == 1:
        return img
    luma = img.data @ LUMA_WEIGHTS
    return RasterImage(np.clip(luma, 0.0, 1.0))


def grayscale_to_rgb(img: RasterImage) -> RasterImage:
    if img.channels == 3:
        return img
    return RasterImage(np.repeat(img.data[:, :, None], 3, axis=2))


def match_channels(img: RasterImage, channels: int) -> RasterImage:
    return to_grayscale(img) if channels == 1 else grayscale_to_rgb(img)


def apply_transform(img: RasterImage, t: Transform) -> RasterImage:
    if t.is_identity():
        return img
    return RasterImage(t.apply_array(img.data))


def apply_transform_mask(mask: BinaryMask, t: Transform) -> BinaryMask:
    if t.is_identity():
        return mask
    return BinaryMask(t.apply_array(mask.data))


def crop(img: RasterImage, x: int, y: int, width: int, height: int) -> RasterImage:
    if x < 0 or y < 0 or width < 1 or height < 1 or x + width > img.width or y + height > img.height:
        raise ParameterError(
            f"crop ({x}, {y}, {width}x{height}) outside {img.width}x{img.height} image"
        )
    return RasterImage(img.data[y:y + height, x:x + width])


def crop_mask(mask: BinaryMask, x: int, y: int, width: int, height: int) -> BinaryMask:
    if x < 0 or y < 0 or width < 1 or height < 1 or x + width > mask.width or y + height > mask.height:
        raise ParameterError(
            f"crop ({x}, {y}, {width}x{height}) outside {mask.width}x{mask.height} mask"
        )
    return BinaryMask(mask.data[y:y + height, x:x + width])


def center_crop(img: RasterImage, width: int, height: int) -> RasterImage:
    if width > img.width or height > img.height:
        raise ParameterError(
            f"cannot center-crop {img.width}x{img.height} image to {width}x{height}"
        )
    return crop(img, (img.width - width) // 2, (img.height - height) // 2, width, height)
