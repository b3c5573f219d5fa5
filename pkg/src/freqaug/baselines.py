"""Comparison filters: Gaussian high-pass (3D/2D) and frequency-domain amplitude mixing.

The Gaussian high-pass is realized as identity minus a separable Gaussian
blur, the standard unsharp-style construction, with mirror (no edge repeat)
boundary padding.  Amplitude mixing blends the magnitude spectra of two
clips while keeping the phase of the first.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .core import Spectrum, ValueRange, VideoClip
from .dft import dft_nd, idft_nd
from .errors import ConfigError, DimensionMismatchError


class GaussianDims(enum.Enum):
    SPATIOTEMPORAL_3D = "3d"
    SPATIAL_2D = "2d"


@dataclass(frozen=True)
class GaussianHpfSpec:
    kernel_size: int
    sigma: float
    dims: GaussianDims = GaussianDims.SPATIOTEMPORAL_3D

    def __post_init__(self):
        if self.kernel_size < 1 or self.kernel_size % 2 == 0:
            raise ConfigError(f"kernel size must be odd and positive, got {self.kernel_size}")
        if self.sigma <= 0:
            raise ConfigError(f"sigma must be positive, got {self.sigma}")

    @property
    def axes(self) -> tuple:
        return (0, 1, 2) if self.dims is GaussianDims.SPATIOTEMPORAL_3D else (1, 2)


@dataclass(frozen=True)
class AmplitudeMixSpec:
    """Mixing strength is drawn uniformly from (0, eta]."""

    eta: float

    def __post_init__(self):
        if not 0.0 < self.eta <= 1.0:
            raise ConfigError(f"eta must lie in (0, 1], got {self.eta}")


def gaussian_kernel_1d(kernel_size: int, sigma: float) -> np.ndarray:
    """Sampled Gaussian, normalized to sum 1."""
    x = np.arange(kernel_size, dtype=np.float64) - (kernel_size - 1) / 2.0
    k = np.exp(-0.5 * (x / sigma) ** 2)
    return k / k.sum()


def _blur_axis(data: np.ndarray, axis: int, kernel: np.ndarray) -> np.ndarray:
    half = len(kernel) // 2
    if half == 0:
        return data
    pad = [(0, 0)] * data.ndim
    pad[axis] = (half, half)
    padded = np.pad(data, pad, mode="reflect")
    out = np.zeros_like(data)
    n = data.shape[axis]
    sl = [slice(None)] * data.ndim
    for j, wj in enumerate(kernel):
        sl[axis] = slice(j, j + n)
        out += wj * padded[tuple(sl)]
    return out


def gaussian_blur(clip: VideoClip, spec: GaussianHpfSpec) -> VideoClip:
    """Separable Gaussian blur over the axes selected by ``spec.dims``."""
    for ax in spec.axes:
        if clip.data.shape[ax] < spec.kernel_size:
            raise ConfigError(
                f"kernel size {spec.kernel_size} exceeds clip axis {ax} "
                f"of length {clip.data.shape[ax]}")
    kernel = gaussian_kernel_1d(spec.kernel_size, spec.sigma).astype(clip.data.dtype)
    out = clip.data
    for ax in spec.axes:
        out = _blur_axis(out, ax, kernel)
    return VideoClip(out, value_range=ValueRange.NORMALIZED, fps=clip.fps)


def gaussian_hpf(clip: VideoClip, spec: GaussianHpfSpec) -> VideoClip:
    """High-pass residual: the clip minus its Gaussian blur."""
    blurred = gaussian_blur(clip, spec)
    return VideoClip(clip.data - blurred.data, value_range=ValueRange.NORMALIZED, fps=clip.fps)


def amplitude_mix_with_lambda(clip_a: VideoClip, clip_b: VideoClip, lam: float) -> VideoClip:
    """Blend amplitude spectra as (1-lam)|A| + lam|B|, keeping the phase of A."""
    if clip_a.data.shape != clip_b.data.shape:
        raise DimensionMismatchError(
            f"clips must share a shape, got {clip_a.data.shape} and {clip_b.data.shape}")
    spec_a = dft_nd(clip_a).data
    spec_b = dft_nd(clip_b).data
    amplitude = (1.0 - lam) * np.abs(spec_a) + lam * np.abs(spec_b)
    # angle(0) == 0, so zero-amplitude bins of A deterministically keep phase 0
    mixed = amplitude * np.exp(1j * np.angle(spec_a))
    mixed = mixed.astype(spec_a.dtype, copy=False)
    return idft_nd(Spectrum(mixed, value_range=ValueRange.NORMALIZED, fps=clip_a.fps))


def amplitude_mix(clip_a: VideoClip, clip_b: VideoClip, spec: AmplitudeMixSpec,
                  rng: np.random.Generator) -> VideoClip:
    """Amplitude mixing with strength drawn from U(0, eta)."""
    lam = float(rng.uniform(0.0, spec.eta))
    return amplitude_mix_with_lambda(clip_a, clip_b, lam)
