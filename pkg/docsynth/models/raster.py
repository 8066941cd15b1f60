"""Pixel containers shared by every stage: images, ink masks and dihedral transforms.

Images hold float64 intensities in [0, 1]; 8-bit quantization only happens at
serialization time.
"""

from dataclasses import dataclass

import numpy as np

from docsynth.models.errors import ParameterError

_ROTATIONS = (0, 90, 180, 270)


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, order="C", copy=True)
    arr.flags.writeable = False
    return arr


def quantize(values: np.ndarray) -> np.ndarray:
    """Map [0, 1] intensities to 8-bit levels, rounding half away from zero."""
    return np.floor(np.clip(values, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)


@dataclass(frozen=True, eq=False)
class RasterImage:
    data: np.ndarray  # (H, W) or (H, W, 3), float64 in [0, 1]

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim == 3 and arr.shape[2] == 1:
            arr = arr[:, :, 0]
        if arr.ndim not in (2, 3) or (arr.ndim == 3 and arr.shape[2] != 3):
            raise ParameterError(f"image data must be (H, W) or (H, W, 3), got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ParameterError("image must be at least 1x1")
        if not np.all(np.isfinite(arr)) or arr.min() < 0.0 or arr.max() > 1.0:
            raise ParameterError("image intensities must lie in [0, 1]")
        object.__setattr__(self, "data", _freeze(arr))

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def channels(self) -> int:
        return 1 if self.data.ndim == 2 else 3

    @property
    def shape(self) -> tuple[int, int]:
        return (self.height, self.width)

    def planes(self) -> list[np.ndarray]:
        """Per-channel 2-D views."""
        if self.channels == 1:
            return [self.data]
        return [self.data[:, :, c] for c in range(3)]

    @classmethod
    def from_planes(cls, planes: list[np.ndarray]) -> "RasterImage":
        if len(planes) == 1:
            return cls(planes[0])
        return cls(np.stack(planes, axis=2))

    @classmethod
    def from_uint8(cls, levels: np.ndarray) -> "RasterImage":
        return cls(np.asarray(levels, dtype=np.float64) / 255.0)

    def to_uint8(self) -> np.ndarray:
        return quantize(self.data)

    def equals(self, other: "RasterImage") -> bool:
        return self.data.shape == other.data.shape and bool(np.array_equal(self.data, other.data))


@dataclass(frozen=True, eq=False)
class BinaryMask:
    data: np.ndarray  # (H, W) bool, True = ink

    def __post_init__(self):
        arr = np.asarray(self.data)
        if arr.ndim != 2:
            raise ParameterError(f"mask data must be 2-D, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ParameterError("mask must be at least 1x1")
        object.__setattr__(self, "data", _freeze(arr.astype(bool)))

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def foreground_count(self) -> int:
        return int(np.count_nonzero(self.data))

    def is_empty(self) -> bool:
        return not self.data.any()

    @classmethod
    def empty(cls, height: int, width: int) -> "BinaryMask":
        return cls(np.zeros((height, width), dtype=bool))

    @classmethod
    def from_uint8(cls, levels: np.ndarray) -> "BinaryMask":
        """Dark pixels (level < 128) are ink."""
        return cls(np.asarray(levels) < 128)

    def to_uint8(self) -> np.ndarray:
        """Serialized polarity: ink 0, background 255."""
        return np.where(self.data, 0, 255).astype(np.uint8)

    def equals(self, other: "BinaryMask") -> bool:
        return self.shape == other.shape and bool(np.array_equal(self.data, other.data))


@dataclass(frozen=True)
class Transform:
    """Element of the dihedral group D4: horizontal flip first, then CCW rotation."""

    rotation: int = 0
    hflip: bool = False

    def __post_init__(self):
        if self.rotation not in _ROTATIONS:
            raise ParameterError(f"rotation must be one of {_ROTATIONS}, got {self.rotation}")
        object.__setattr__(self, "hflip", bool(self.hflip))

    @property
    def quarter_turns(self) -> int:
        return self.rotation // 90

    @property
    def index(self) -> int:
        return self.quarter_turns + 4 * int(self.hflip)

    @classmethod
    def from_index(cls, index: int) -> "Transform":
        if not 0 <= index < 8:
            raise ParameterError(f"transform index must be in 0..7, got {index}")
        return cls(rotation=90 * (index % 4), hflip=index >= 4)

    @classmethod
    def all(cls) -> list["Transform"]:
        return [cls.from_index(i) for i in range(8)]

    @classmethod
    def identity(cls) -> "Transform":
        return cls()

    def is_identity(self) -> bool:
        return self.rotation == 0 and not self.hflip

    def compose(self, other: "Transform") -> "Transform":
        """Transform equivalent to applying self, then other."""
        turns = other.quarter_turns + (-self.quarter_turns if other.hflip else self.quarter_turns)
        return Transform(rotation=90 * (turns % 4), hflip=self.hflip != other.hflip)

    def inverse(self) -> "Transform":
        if self.hflip:
            return self
        return Transform(rotation=(360 - self.rotation) % 360)

    def apply_array(self, arr: np.ndarray) -> np.ndarray:
        out = arr[:, ::-1] if self.hflip else arr
        return np.ascontiguousarray(np.rot90(out, k=self.quarter_turns, axes=(0, 1)))
