"""Builders for every frequency mask used by the engine.

Bin k of an axis of length N carries the signed normalized frequency
k/N for k < (N+1)//2 and (k-N)/N otherwise, i.e. values in [-0.5, 0.5)
with the Nyquist bin of an even axis at -0.5.  An ideal low-pass mask
keeps bins with |freq| strictly below the cutoff (ties rejected); the
high-pass mask is its exact complement.  Every builder returns masks
symmetric under per-axis frequency negation so filtered real signals
stay real.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .core import FilterMask, MaskKind
from .errors import ConfigError


class Band(enum.Enum):
    LOW_PASS = "lpf"
    HIGH_PASS = "hpf"


@dataclass(frozen=True)
class BandSpec:
    """One ideal filter: pass band and normalized cutoff in (0, 0.5]."""

    band: Band
    cutoff: float

    def __post_init__(self):
        if not isinstance(self.band, Band):
            raise ConfigError(f"band must be a Band, got {self.band!r}")
        if not 0.0 < self.cutoff <= 0.5:
            raise ConfigError(f"cutoff must lie in (0, 0.5], got {self.cutoff}")


@dataclass(frozen=True)
class FilterSpec:
    """Temporal and/or spatial ideal filter; at least one part present."""

    temporal: Optional[BandSpec] = None
    spatial: Optional[BandSpec] = None

    def __post_init__(self):
        if self.temporal is None and self.spatial is None:
            raise ConfigError("filter needs a temporal part, a spatial part, or both")


@dataclass(frozen=True)
class RandomMaskSpec:
    """Random temporal band-reject mask: width is drawn from {1, .., M-1} bins."""

    M: int
    T: int

    def __post_init__(self):
        if not 2 <= self.M <= self.T:
            raise ConfigError(f"mask parameter must satisfy 2 <= M <= T, got M={self.M}, T={self.T}")


def normalized_frequency(k: int, n: int) -> float:
    """Signed normalized frequency of bin k on an axis of length n."""
    if not 0 <= k < n:
        raise IndexError(f"bin {k} out of range for axis length {n}")
    return k / n if k < (n + 1) // 2 else (k - n) / n


def axis_frequencies(n: int) -> np.ndarray:
    """Signed normalized frequency of every bin, in natural bin order."""
    k = np.arange(n)
    return np.where(k < (n + 1) // 2, k, k - n) / n


def _check_cutoff(f_co: float) -> None:
    if not 0.0 < f_co <= 0.5:
        raise ConfigError(f"cutoff must lie in (0, 0.5], got {f_co}")


def build_temporal_lpf(t: int, f_co: float) -> np.ndarray:
    """1-D binary mask passing bins with |freq| strictly below the cutoff."""
    if t < 1:
        raise ConfigError(f"axis length must be >= 1, got {t}")
    _check_cutoff(f_co)
    return (np.abs(axis_frequencies(t)) < f_co).astype(np.float64)


def build_temporal_hpf(t: int, f_co: float) -> np.ndarray:
    """Exact complement of the low-pass mask."""
    return 1.0 - build_temporal_lpf(t, f_co)


def build_spatial_lpf(h: int, w: int, f_co: float) -> np.ndarray:
    """2-D binary mask; a bin passes only when both axes are below the cutoff."""
    if h < 1 or w < 1:
        raise ConfigError(f"axis lengths must be >= 1, got ({h}, {w})")
    _check_cutoff(f_co)
    pass_h = np.abs(axis_frequencies(h)) < f_co
    pass_w = np.abs(axis_frequencies(w)) < f_co
    return (pass_h[:, None] & pass_w[None, :]).astype(np.float64)


def build_spatial_hpf(h: int, w: int, f_co: float) -> np.ndarray:
    return 1.0 - build_spatial_lpf(h, w, f_co)


def _band_mask(part: Optional[BandSpec], builder_lpf, builder_hpf, *dims) -> np.ndarray:
    if part is None:
        return np.ones(dims, dtype=np.float64)
    if part.band is Band.LOW_PASS:
        return builder_lpf(*dims, part.cutoff)
    return builder_hpf(*dims, part.cutoff)


def build_3d_mask(spec: FilterSpec, shape: Tuple[int, int, int]) -> FilterMask:
    """Outer product of the temporal and spatial masks over the (T, H, W) grid.

    A missing part acts as the all-ones mask on its axes.
    """
    t, h, w = shape
    mask_t = _band_mask(spec.temporal, build_temporal_lpf, build_temporal_hpf, t)
    mask_s = _band_mask(spec.spatial, build_spatial_lpf, build_spatial_hpf, h, w)
    return FilterMask(mask_t[:, None, None] * mask_s[None, :, :], kind=MaskKind.IDEAL_BINARY)


def draw_random_band(spec: RandomMaskSpec, rng: np.random.Generator) -> Tuple[int, int]:
    """Sample (start_bin, width_bins) for the random temporal reject band.

    The start bin is uniform over the non-negative frequency bins
    0..floor(T/2); the width is uniform over {1, .., M-1}.
    """
    start = int(rng.integers(0, spec.T // 2 + 1))
    width = int(rng.integers(1, spec.M))
    return start, width


def band_reject_mask(t: int, start_bin: int, width_bins: int) -> np.ndarray:
    """1-D mask rejecting bins with start/T <= |freq| < (start+width)/T.

    The band applies symmetrically to positive and negative frequencies;
    anything beyond the Nyquist bin is clamped there (no bins exist past it).
    """
    if width_bins < 1:
        raise ConfigError(f"band width must be >= 1 bin, got {width_bins}")
    # |freq| = a/T with a = min(k, T-k); integer compares keep boundaries exact
    k = np.arange(t)
    a = np.minimum(k, t - k)
    rejected = (a >= start_bin) & (a < start_bin + width_bins)
    return (~rejected).astype(np.float64)


def build_random_temporal_mask(spec: RandomMaskSpec, rng: np.random.Generator) -> np.ndarray:
    """Draw a reject band and return the 1-D binary mask of length T."""
    start, width = draw_random_band(spec, rng)
    return band_reject_mask(spec.T, start, width)


def random_mask_3d(spec: RandomMaskSpec, shape: Tuple[int, int, int],
                   rng: np.random.Generator) -> FilterMask:
    """Random temporal mask broadcast over the full (T, H, W) grid."""
    t, h, w = shape
    if t != spec.T:
        raise ConfigError(f"random mask was specified for T={spec.T}, clip has T={t}")
    mask_t = build_random_temporal_mask(spec, rng)
    data = np.broadcast_to(mask_t[:, None, None], (t, h, w)).copy()
    return FilterMask(data, kind=MaskKind.RANDOM_MASK)
