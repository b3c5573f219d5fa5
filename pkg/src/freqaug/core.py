"""Dense containers shared by every other module.

A video clip is a real-valued ``(T, H, W, C)`` tensor with a declared value
range, a spectrum holds the complex DFT coefficients of a clip in natural
(unshifted) bin order, and a filter mask carries real weights over the
``(T, H, W)`` frequency grid that are applied identically to every channel.

All three types are treated as immutable after construction and every
operation on them is a pure function, so instances can be shared across
threads and independent clips processed in parallel without coordination.
Callers must not mutate the wrapped arrays.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DimensionMismatchError, InvalidShapeError, InvalidValueError

REAL_DTYPES = (np.float32, np.float64)
COMPLEX_DTYPES = (np.complex64, np.complex128)


class ValueRange(enum.Enum):
    """Declared numeric range of clip samples."""

    UNIT = "unit"              # every sample in [0, 1]
    NORMALIZED = "normalized"  # unconstrained floats (zero-mean inputs, filter outputs)
    RAW_U8 = "raw_u8"          # every sample in [0, 255]


def _as_real_tensor(data) -> np.ndarray:
    arr = np.asarray(data)
    if arr.dtype not in REAL_DTYPES:
        arr = arr.astype(np.float32)
    return np.ascontiguousarray(arr)


@dataclass(frozen=True)
class VideoClip:
    """One clip: frames x rows x cols x channels, plus range metadata.

    ``fps`` is informational only and never affects numerics.
    """

    data: np.ndarray
    value_range: ValueRange = ValueRange.UNIT
    fps: Optional[float] = None

    def __post_init__(self):
        arr = _as_real_tensor(self.data)
        object.__setattr__(self, "data", arr)
        if arr.ndim != 4:
            raise InvalidShapeError(f"clip must be (T, H, W, C), got shape {arr.shape}")
        t, h, w, c = arr.shape
        if min(t, h, w) < 1:
            raise InvalidShapeError(f"clip dimensions must all be >= 1, got {arr.shape}")
        if c not in (1, 3):
            raise InvalidShapeError(f"channel count must be 1 or 3, got {c}")
        if not np.isfinite(arr).all():
            raise InvalidValueError("clip contains NaN or Inf values")
        if self.value_range is ValueRange.UNIT:
            if arr.min() < 0.0 or arr.max() > 1.0:
                raise InvalidValueError("unit-range clip has values outside [0, 1]")
        elif self.value_range is ValueRange.RAW_U8:
            if arr.min() < 0.0 or arr.max() > 255.0:
                raise InvalidValueError("raw_u8 clip has values outside [0, 255]")

    @property
    def shape(self) -> tuple:
        return self.data.shape

    @property
    def num_frames(self) -> int:
        return self.data.shape[0]


@dataclass(frozen=True)
class Spectrum:
    """Complex DFT coefficients of a clip, one plane per channel.

    Bins are kept in natural order: index k runs 0..N-1 per axis, so bins k
    and N-k are conjugate partners for real input.  ``value_range`` and
    ``fps`` record the originating clip's metadata.
    """

    data: np.ndarray
    value_range: ValueRange = ValueRange.NORMALIZED
    fps: Optional[float] = None

    def __post_init__(self):
        arr = np.asarray(self.data)
        if arr.dtype not in COMPLEX_DTYPES:
            arr = arr.astype(np.complex128)
        object.__setattr__(self, "data", np.ascontiguousarray(arr))
        if arr.ndim != 4:
            raise InvalidShapeError(f"spectrum must be (T, H, W, C), got shape {arr.shape}")

    @property
    def shape(self) -> tuple:
        return self.data.shape


class MaskKind(enum.Enum):
    IDEAL_BINARY = "ideal_binary"
    GAUSSIAN_DERIVED = "gaussian_derived"
    RANDOM_MASK = "random_mask"
    AMPLITUDE_MIX_PLACEHOLDER = "amplitude_mix_placeholder"


def negated_frequency_view(mask: np.ndarray) -> np.ndarray:
    """View of a (T, H, W) grid with every axis index k replaced by (N-k) mod N."""
    idx = [(-np.arange(n)) % n for n in mask.shape]
    return mask[np.ix_(*idx)]


@dataclass(frozen=True)
class FilterMask:
    """Real weights in [0, 1] over the (T, H, W) frequency grid.

    Masks must be symmetric under per-axis frequency negation,
    mask[k_t, k_h, k_w] == mask[(T-k_t) % T, (H-k_h) % H, (W-k_w) % W],
    so that masked spectra of real clips invert back to real clips.
    """

    data: np.ndarray
    kind: MaskKind = MaskKind.IDEAL_BINARY

    def __post_init__(self):
        arr = np.ascontiguousarray(np.asarray(self.data, dtype=np.float64))
        object.__setattr__(self, "data", arr)
        if arr.ndim != 3:
            raise InvalidShapeError(f"mask must be (T, H, W), got shape {arr.shape}")
        if arr.min() < 0.0 or arr.max() > 1.0:
            raise InvalidValueError("mask values must lie in [0, 1]")
        if self.kind is MaskKind.IDEAL_BINARY and not np.isin(arr, (0.0, 1.0)).all():
            raise InvalidValueError("ideal_binary mask may only contain 0 and 1")
        if not np.array_equal(arr, negated_frequency_view(arr)):
            raise InvalidValueError("mask is not symmetric under frequency negation")

    @property
    def shape(self) -> tuple:
        return self.data.shape


def new_clip(shape, fill: float, value_range: Optional[ValueRange] = None,
             fps: Optional[float] = None, dtype=np.float32) -> VideoClip:
    """Constant clip of the given shape.

    When ``value_range`` is omitted it is inferred from ``fill``: [0, 1]
    maps to unit, (1, 255] to raw_u8, anything else to normalized.
    """
    if len(shape) != 4:
        raise InvalidShapeError(f"clip shape must have 4 components, got {shape}")
    if min(shape) < 1:
        raise InvalidShapeError(f"clip dimensions must all be >= 1, got {shape}")
    if value_range is None:
        if 0.0 <= fill <= 1.0:
            value_range = ValueRange.UNIT
        elif 0.0 <= fill <= 255.0:
            value_range = ValueRange.RAW_U8
        else:
            value_range = ValueRange.NORMALIZED
    data = np.full(shape, fill, dtype=dtype)
    return VideoClip(data, value_range=value_range, fps=fps)


def elementwise_mul(spec: Spectrum, mask: FilterMask) -> Spectrum:
    """Multiply a spectrum by a mask, broadcasting the mask over channels."""
    if spec.data.shape[:3] != mask.data.shape:
        raise DimensionMismatchError(
            f"mask shape {mask.data.shape} does not match spectrum {spec.data.shape[:3]}")
    # cast the mask to the spectrum's real precision so complex64 stays complex64
    real_dtype = np.float32 if spec.data.dtype == np.complex64 else np.float64
    weights = mask.data.astype(real_dtype, copy=False)[..., None]
    return Spectrum(spec.data * weights, value_range=spec.value_range, fps=spec.fps)
