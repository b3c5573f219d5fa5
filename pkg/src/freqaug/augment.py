"""Stochastic frequency filtering of clips, single view and two view.

Application draws r ~ U(0, 1); the clip passes through untouched when
r >= p, otherwise its spectrum is taken over exactly the axes the filter
touches, multiplied by the filter mask, and inverted.  Outputs are never
re-clamped to the input value range: ideal filtering legitimately
produces negative values and overshoot.

Reproducibility contract: randomness comes only from the explicit
generator argument.  Batch processing derives one counter-based stream
per clip as ``Philox(key = seed XOR stable_hash64(clip_id))`` (see
:func:`clip_stream`), so any worker arrangement yields identical output.
"""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .baselines import GaussianHpfSpec, gaussian_hpf
from .core import FilterMask, VideoClip, elementwise_mul
from .dft import dft_nd, idft_nd
from .errors import ConfigError
from .filters import Band, BandSpec, FilterSpec, RandomMaskSpec, build_3d_mask, random_mask_3d

AnyFilterSpec = Union[FilterSpec, RandomMaskSpec, GaussianHpfSpec]

PRESET_NAMES = ("freqaug_t", "freqaug_st")

_MASK64 = (1 << 64) - 1


class ViewSelection(enum.Enum):
    BOTH = "both"
    VIEW1_ONLY = "view1_only"
    VIEW2_ONLY = "view2_only"


@dataclass(frozen=True)
class FreqAugConfig:
    """Filter choice, application probability, and base RNG seed."""

    filter: AnyFilterSpec
    p: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if not isinstance(self.filter, (FilterSpec, RandomMaskSpec, GaussianHpfSpec)):
            raise ConfigError(f"unsupported filter spec {type(self.filter).__name__}; "
                              "amplitude mixing needs two clips, use baselines.amplitude_mix")
        if not 0.0 <= self.p <= 1.0:
            raise ConfigError(f"probability must lie in [0, 1], got {self.p}")


def preset(name: str, p: Optional[float] = None, seed: int = 0) -> FreqAugConfig:
    """Named default configurations.

    freqaug_t: temporal high-pass, cutoff 0.1, p 0.5.
    freqaug_st: freqaug_t plus spatial high-pass, cutoff 0.01.
    """
    if name == "freqaug_t":
        spec = FilterSpec(temporal=BandSpec(Band.HIGH_PASS, 0.1))
    elif name == "freqaug_st":
        spec = FilterSpec(temporal=BandSpec(Band.HIGH_PASS, 0.1),
                          spatial=BandSpec(Band.HIGH_PASS, 0.01))
    else:
        raise ConfigError(f"unknown preset {name!r}; choose from {PRESET_NAMES}")
    return FreqAugConfig(filter=spec, p=0.5 if p is None else p, seed=seed)


def stable_hash64(clip_id: str) -> int:
    """Process-independent 64-bit hash of a clip identifier."""
    return int.from_bytes(hashlib.blake2b(clip_id.encode("utf-8"), digest_size=8).digest(),
                          "little")


def clip_stream(seed: int, clip_id: str) -> np.random.Generator:
    """Counter-based random stream for one clip of a batch.

    The key is ``seed XOR stable_hash64(clip_id)``; this derivation is part
    of the public contract so external callers can reproduce any clip's
    stream without replaying the batch.
    """
    return np.random.Generator(np.random.Philox(key=(seed ^ stable_hash64(clip_id)) & _MASK64))


@lru_cache(maxsize=64)
def _cached_mask(spec: FilterSpec, shape: Tuple[int, int, int]) -> FilterMask:
    return build_3d_mask(spec, shape)


def _filter_axes(spec: AnyFilterSpec) -> tuple:
    if isinstance(spec, RandomMaskSpec):
        return (0,)
    # temporal-only specs transform T, spatial-only (H, W), combined all three
    axes = ()
    if spec.temporal is not None:
        axes += (0,)
    if spec.spatial is not None:
        axes += (1, 2)
    return axes


@dataclass(frozen=True)
class AugmentResult:
    clip: VideoClip
    applied: bool
    mask: Optional[FilterMask] = None
    draw: Optional[float] = None


def _apply_filter(clip: VideoClip, spec: AnyFilterSpec,
                  rng: np.random.Generator) -> Tuple[VideoClip, Optional[FilterMask]]:
    if isinstance(spec, GaussianHpfSpec):
        return gaussian_hpf(clip, spec), None
    shape3 = clip.data.shape[:3]
    if isinstance(spec, RandomMaskSpec):
        mask = random_mask_3d(spec, shape3, rng)
    else:
        mask = _cached_mask(spec, shape3)
    axes = _filter_axes(spec)
    spectrum = dft_nd(clip, axes)
    filtered = idft_nd(elementwise_mul(spectrum, mask), axes)
    return filtered, mask


def apply_freqaug(clip: VideoClip, cfg: FreqAugConfig,
                  rng: np.random.Generator) -> AugmentResult:
    """Apply the configured filter with probability p.

    Always consumes exactly one uniform draw for the accept decision (plus
    the mask draws when a random-mask filter fires), so streams stay
    aligned regardless of p.  The unfiltered branch returns the input clip
    object itself.
    """
    r = float(rng.random())
    if r >= cfg.p:
        return AugmentResult(clip=clip, applied=False, mask=None, draw=r)
    filtered, mask = _apply_filter(clip, cfg.filter, rng)
    return AugmentResult(clip=filtered, applied=True, mask=mask, draw=r)


@dataclass(frozen=True)
class TwoViewResult:
    view1: AugmentResult
    view2: AugmentResult


def apply_two_view(clip_a: VideoClip, clip_b: VideoClip, cfg: FreqAugConfig,
                   rng: np.random.Generator,
                   views: ViewSelection = ViewSelection.BOTH) -> TwoViewResult:
    """Augment two views with independent draws from one stream.

    View 1 always draws before view 2.  A deselected view neither draws
    nor changes, which keeps single-view ablations reproducible.
    """
    if views in (ViewSelection.BOTH, ViewSelection.VIEW1_ONLY):
        res_a = apply_freqaug(clip_a, cfg, rng)
    else:
        res_a = AugmentResult(clip=clip_a, applied=False)
    if views in (ViewSelection.BOTH, ViewSelection.VIEW2_ONLY):
        res_b = apply_freqaug(clip_b, cfg, rng)
    else:
        res_b = AugmentResult(clip=clip_b, applied=False)
    return TwoViewResult(view1=res_a, view2=res_b)


@dataclass(frozen=True)
class PipelineReport:
    ok: bool
    warnings: Tuple[str, ...] = ()


def pipeline_position_check(stage_log: Sequence[str]) -> PipelineReport:
    """Advisory check that frequency augmentation is the final pipeline stage.

    Filtering assumes all other augmentations and normalization already
    ran; an empty pipeline or one without a freqaug stage passes vacuously.
    """
    warnings: List[str] = []
    stages = list(stage_log)
    for i, name in enumerate(stages):
        if name.lower().startswith("freqaug") and i != len(stages) - 1:
            warnings.append(
                f"stage {name!r} at position {i} runs before {stages[i + 1]!r}; "
                "frequency augmentation should be the last transform before tensor output")
    return PipelineReport(ok=not warnings, warnings=tuple(warnings))
