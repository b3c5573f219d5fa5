"""Spectrum statistics and visual diagnostics.

sigma_t measures how concentrated a clip's energy is on the temporal
zero frequency: take the full 3-D spectrum amplitude (channel mean),
floor it, log it, average over spatial bins, and return the population
standard deviation over temporal bins.  Static content gives a large
sigma_t, rapidly changing content a small one.

The low-frequency ratio is the amplitude mass of a target bin set over
the total; the default target is the union of the temporal-zero plane
and the spatial-zero column.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .core import VideoClip
from .dft import dft_nd
from .errors import ConfigError, UndefinedStatisticError

# floor applied to spectrum amplitudes before taking logs; far below any
# real content amplitude at unit range, so only exact-zero bins hit it
AMPLITUDE_FLOOR = 1e-8

DEFAULT_SIGMA_T_THRESHOLD = 0.05


def _channel_mean_amplitude(clip: VideoClip) -> np.ndarray:
    """(T, H, W) spectrum amplitude, averaged over channels, in 64-bit."""
    clip64 = VideoClip(clip.data.astype(np.float64), value_range=clip.value_range,
                       fps=clip.fps)
    return np.abs(dft_nd(clip64).data).mean(axis=-1)


def temporal_log_profile(clip: VideoClip) -> np.ndarray:
    """Mean over spatial bins of log(floored amplitude), one value per k_t."""
    amp = np.maximum(_channel_mean_amplitude(clip), AMPLITUDE_FLOOR)
    return np.log(amp).mean(axis=(1, 2))


def sigma_t(clip: VideoClip) -> float:
    """Population standard deviation of the temporal log-amplitude profile."""
    if clip.num_frames < 2:
        raise UndefinedStatisticError("sigma_t needs at least 2 frames")
    return float(np.std(temporal_log_profile(clip)))


def default_low_frequency_target(shape3: Tuple[int, int, int]) -> np.ndarray:
    """Union of the k_t=0 plane and the (k_h, k_w)=(0, 0) column."""
    t, h, w = shape3
    target = np.zeros((t, h, w), dtype=bool)
    target[0, :, :] = True
    target[:, 0, 0] = True
    return target


def lfc_ratio(clip: VideoClip, target: Optional[np.ndarray] = None) -> float:
    """Amplitude mass of the target bins over the total, channels summed."""
    clip64 = VideoClip(clip.data.astype(np.float64), value_range=clip.value_range,
                       fps=clip.fps)
    amp = np.abs(dft_nd(clip64).data).sum(axis=-1)
    if target is None:
        target = default_low_frequency_target(amp.shape)
    else:
        target = np.asarray(target, dtype=bool)
        if target.shape != amp.shape:
            raise ConfigError(
                f"target shape {target.shape} does not match spectrum {amp.shape}")
    total = float(amp.sum())
    if total == 0.0:
        raise UndefinedStatisticError("low-frequency ratio is undefined for an all-zero clip")
    return float(amp[target].sum()) / total


@dataclass(frozen=True)
class SpectrumStats:
    sigma_t: float
    lfc_ratio: float
    temporal_profile: np.ndarray


def compute_stats(clip: VideoClip) -> SpectrumStats:
    return SpectrumStats(sigma_t=sigma_t(clip), lfc_ratio=lfc_ratio(clip),
                         temporal_profile=temporal_log_profile(clip))


@dataclass(frozen=True)
class DatasetBinning:
    """Equal-count bins over ascending low-frequency ratio.

    ``bin_edges`` holds the lowest ratio of each bin plus the overall
    maximum, so edges are non-decreasing and len(edges) == n_bins + 1.
    """

    bin_edges: np.ndarray
    membership: Dict[str, int]
    sizes: Tuple[int, ...]


def bin_dataset_by_lfc(stats: Sequence[Tuple[str, float]], n_bins: int) -> DatasetBinning:
    """Stable-sort clips by ratio, split into contiguous equal-count bins.

    Sizes differ by at most one, larger bins first.
    """
    if n_bins < 1:
        raise ConfigError(f"need at least one bin, got {n_bins}")
    if not stats:
        raise ConfigError("cannot bin an empty dataset")
    if n_bins > len(stats):
        raise ConfigError(f"cannot split {len(stats)} clips into {n_bins} non-empty bins")
    order = sorted(range(len(stats)), key=lambda i: stats[i][1])
    chunks = np.array_split(np.asarray(order), n_bins)
    membership: Dict[str, int] = {}
    edges = []
    for b, chunk in enumerate(chunks):
        edges.append(stats[chunk[0]][1])
        for i in chunk:
            membership[stats[i][0]] = b
    edges.append(stats[order[-1]][1])
    return DatasetBinning(bin_edges=np.asarray(edges, dtype=np.float64),
                          membership=membership,
                          sizes=tuple(len(c) for c in chunks))


# ---------------------------------------------------------------------------
# renderings

GRAY_MIDPOINT = 128  # value used when an image has no dynamic range


def _to_u8(img: np.ndarray) -> np.ndarray:
    lo, hi = float(img.min()), float(img.max())
    if hi == lo:
        return np.full(img.shape, GRAY_MIDPOINT, dtype=np.uint8)
    scaled = (img - lo) / (hi - lo) * 255.0
    return np.rint(scaled).astype(np.uint8)


@dataclass(frozen=True)
class SpectrumRender:
    """Per-slice log-amplitude images plus the 1-D temporal profile."""

    slice_images: Dict[int, np.ndarray]
    profile: np.ndarray
    profile_image: np.ndarray


def profile_plot_image(profile: np.ndarray, height: int = 96,
                       column_width: int = 8) -> np.ndarray:
    """Tiny bar-chart raster of a 1-D profile (white bars on black)."""
    prof = np.asarray(profile, dtype=np.float64)
    lo, hi = float(prof.min()), float(prof.max())
    span = hi - lo if hi > lo else 1.0
    heights = np.rint((prof - lo) / span * (height - 1)).astype(int)
    img = np.zeros((height, len(prof) * column_width), dtype=np.uint8)
    for k, bar in enumerate(heights):
        img[height - 1 - bar:, k * column_width:(k + 1) * column_width] = 255
    return img


def render_spectrum(clip: VideoClip, slices: Optional[Sequence[int]] = None) -> SpectrumRender:
    """Grayscale log-amplitude images of spatial slices, centered for display.

    Each requested temporal-frequency slice becomes a (H, W) image of
    log(|X| + floor), frequency-shifted so the zero bin sits at the image
    center, then min-max normalized on its own.  The spectrum itself is
    never shifted; centering exists only here.
    """
    amp = _channel_mean_amplitude(clip)
    t = amp.shape[0]
    if slices is None:
        slices = range(t)
    log_amp = np.log(amp + AMPLITUDE_FLOOR)
    images: Dict[int, np.ndarray] = {}
    for k_t in slices:
        if not 0 <= k_t < t:
            raise ConfigError(f"slice {k_t} out of range for {t} temporal bins")
        centered = np.fft.fftshift(log_amp[k_t])
        images[int(k_t)] = _to_u8(centered)
    profile = np.log(np.maximum(amp, AMPLITUDE_FLOOR)).mean(axis=(1, 2))
    return SpectrumRender(slice_images=images, profile=profile,
                          profile_image=profile_plot_image(profile))


# ---------------------------------------------------------------------------
# tabular export

STATS_COLUMNS = ("clip_id", "sigma_t", "lfc_ratio", "T", "H", "W", "C", "error")


def format_float(v: float) -> str:
    return repr(float(v))


def stats_row(clip_id: str, clip: Optional[VideoClip], stats: Optional[SpectrumStats],
              error: str = "") -> Tuple[str, ...]:
    if stats is None or clip is None:
        return (clip_id, "", "", "", "", "", "", error)
    t, h, w, c = clip.data.shape
    return (clip_id, format_float(stats.sigma_t), format_float(stats.lfc_ratio),
            str(t), str(h), str(w), str(c), error)


def write_table(path, header: Sequence[str], rows: Sequence[Sequence[str]]) -> None:
    """Tab-delimited table with a header row."""
    lines = ["\t".join(header)]
    lines += ["\t".join(str(v) for v in row) for row in rows]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
