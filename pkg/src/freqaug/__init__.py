"""Frequency-domain filtering augmentation for video clips.

The engine removes selected spatial/temporal frequency bands from dense
(T, H, W, C) clips via the n-dimensional DFT, either deterministically or
stochastically with a per-clip probability, and ships spectrum analytics,
baseline filters, lossless clip IO, and a batch CLI on top.
"""

from .analytics import (DatasetBinning, SpectrumStats, bin_dataset_by_lfc, compute_stats,
                        default_low_frequency_target, lfc_ratio, render_spectrum, sigma_t,
                        temporal_log_profile)
from .augment import (AugmentResult, FreqAugConfig, PRESET_NAMES, PipelineReport,
                      TwoViewResult, ViewSelection, apply_freqaug, apply_two_view,
                      clip_stream, pipeline_position_check, preset, stable_hash64)
from .baselines import (AmplitudeMixSpec, GaussianDims, GaussianHpfSpec, amplitude_mix,
                        amplitude_mix_with_lambda, gaussian_blur, gaussian_hpf)
from .core import (FilterMask, MaskKind, Spectrum, ValueRange, VideoClip, elementwise_mul,
                   new_clip)
from .dft import (Axis, dft_1d, dft_nd, hermitian_defect, idft_1d, idft_nd, naive_dft_1d,
                  naive_dft_nd, naive_idft_1d, naive_idft_nd)
from .errors import (ClipIOError, ConfigError, DimensionMismatchError, FreqAugError,
                     InvalidShapeError, InvalidValueError, SamplingError,
                     SymmetryViolationError, UndefinedStatisticError)
from .filters import (Band, BandSpec, FilterSpec, RandomMaskSpec, axis_frequencies,
                      band_reject_mask, build_3d_mask, build_random_temporal_mask,
                      build_spatial_hpf, build_spatial_lpf, build_temporal_hpf,
                      build_temporal_lpf, draw_random_band, normalized_frequency,
                      random_mask_3d)
from .media_io import (ClipSource, FrameSampling, SaveFormat, SourceKind, TENSOR_SUFFIX,
                       display_rescale, load_clip, load_tensor_file, read_image, save_clip,
                       save_tensor_file, write_image)

__version__ = "0.1.0"
