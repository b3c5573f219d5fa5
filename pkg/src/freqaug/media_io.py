"""Clip serialization: frame directories, raw tensor files, display frames.

Frame directories hold zero-padded numeric filenames of binary portable
images (PGM for single-channel, PPM for three-channel, 8-bit).  Tensor
files are a lossless little-endian binary format:

    offset  size  field
    0       4     magic "VCLP"
    4       1     format version (1)
    5       1     dtype code: 0 = float32, 1 = float64
    6       1     value-range tag: 0 = unit, 1 = normalized, 2 = raw_u8
    7       1     reserved (0)
    8       8     fps as float64 (NaN when unset)
    16      16    dims T, H, W, C as four uint32
    32      ...   row-major payload in the declared dtype

Display frames map a clip's [min, max] affinely onto [0, 255] so signed
filter outputs stay viewable; a constant clip renders as mid-gray 128.
"""

from __future__ import annotations

import enum
import re
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .core import ValueRange, VideoClip
from .errors import ClipIOError, InvalidShapeError, SamplingError

TENSOR_MAGIC = b"VCLP"
TENSOR_VERSION = 1
TENSOR_SUFFIX = ".vclip"

_DTYPE_CODES = {0: np.dtype(np.float32), 1: np.dtype(np.float64)}
_DTYPE_TO_CODE = {v: k for k, v in _DTYPE_CODES.items()}
_RANGE_CODES = {0: ValueRange.UNIT, 1: ValueRange.NORMALIZED, 2: ValueRange.RAW_U8}
_RANGE_TO_CODE = {v: k for k, v in _RANGE_CODES.items()}

GRAY_MIDPOINT = 128


# ---------------------------------------------------------------------------
# portable images (binary PGM / PPM, 8-bit)

def write_image(path, pixels: np.ndarray) -> None:
    """Write an (H, W) or (H, W, 3) uint8 array as binary PGM/PPM."""
    arr = np.asarray(pixels)
    if arr.dtype != np.uint8:
        raise ClipIOError(f"image pixels must be uint8, got {arr.dtype}")
    if arr.ndim == 3 and arr.shape[2] == 1:
        arr = arr[:, :, 0]
    if arr.ndim == 2:
        kind = b"P5"
    elif arr.ndim == 3 and arr.shape[2] == 3:
        kind = b"P6"
    else:
        raise InvalidShapeError(f"image must be (H, W) or (H, W, 3), got {arr.shape}")
    h, w = arr.shape[:2]
    with open(path, "wb") as fh:
        fh.write(kind + b"\n%d %d\n255\n" % (w, h))
        fh.write(np.ascontiguousarray(arr).tobytes())


def read_image(path) -> np.ndarray:
    """Read a binary PGM/PPM into an (H, W, C) uint8 array."""
    raw = Path(path).read_bytes()
    m = re.match(rb"(P[56])\s+(?:#[^\n]*\s+)*(\d+)\s+(\d+)\s+(\d+)\s", raw)
    if not m:
        raise ClipIOError(f"{path}: not a binary PGM/PPM file")
    kind, w, h, maxval = m.group(1), int(m.group(2)), int(m.group(3)), int(m.group(4))
    if maxval != 255:
        raise ClipIOError(f"{path}: only 8-bit images are supported (maxval {maxval})")
    channels = 3 if kind == b"P6" else 1
    payload = raw[m.end():]
    expected = h * w * channels
    if len(payload) < expected:
        raise ClipIOError(f"{path}: truncated image payload")
    return np.frombuffer(payload, dtype=np.uint8, count=expected).reshape(h, w, channels)


# ---------------------------------------------------------------------------
# tensor files

def save_tensor_file(clip: VideoClip, path) -> None:
    """Lossless binary dump of a clip (see module docstring for the layout)."""
    code = _DTYPE_TO_CODE[np.dtype(clip.data.dtype)]
    fps = float("nan") if clip.fps is None else float(clip.fps)
    header = TENSOR_MAGIC + struct.pack(
        "<BBBBd4I", TENSOR_VERSION, code, _RANGE_TO_CODE[clip.value_range], 0,
        fps, *clip.data.shape)
    payload = np.ascontiguousarray(clip.data).astype(clip.data.dtype.newbyteorder("<"),
                                                     copy=False)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload.tobytes())


def load_tensor_file(path) -> VideoClip:
    raw = Path(path).read_bytes()
    if len(raw) < 32 or raw[:4] != TENSOR_MAGIC:
        raise ClipIOError(f"{path}: not a clip tensor file")
    version, code, range_code, _pad, fps, t, h, w, c = struct.unpack("<BBBBd4I", raw[4:32])
    if version != TENSOR_VERSION:
        raise ClipIOError(f"{path}: unsupported tensor format version {version}")
    if code not in _DTYPE_CODES or range_code not in _RANGE_CODES:
        raise ClipIOError(f"{path}: corrupt tensor header")
    dtype = _DTYPE_CODES[code]
    count = t * h * w * c
    if len(raw) - 32 < count * dtype.itemsize:
        raise ClipIOError(f"{path}: truncated tensor payload")
    data = np.frombuffer(raw, dtype=dtype.newbyteorder("<"), count=count, offset=32)
    data = data.astype(dtype, copy=True).reshape(t, h, w, c)
    return VideoClip(data, value_range=_RANGE_CODES[range_code],
                     fps=None if np.isnan(fps) else fps)


# ---------------------------------------------------------------------------
# clip sources

class SourceKind(enum.Enum):
    FRAME_DIR = "frame_dir"
    TENSOR_FILE = "tensor_file"


@dataclass(frozen=True)
class FrameSampling:
    """Strided frame selection: indices start, start+stride, ..."""

    num_frames: Optional[int] = None  # None keeps everything after start
    stride: int = 1
    start: int = 0

    def __post_init__(self):
        if self.stride < 1 or self.start < 0 or \
                (self.num_frames is not None and self.num_frames < 1):
            raise SamplingError(f"invalid sampling {self}")

    def indices(self, available: int) -> np.ndarray:
        if self.num_frames is None:
            idx = np.arange(self.start, available, self.stride)
            if idx.size == 0:
                raise SamplingError(f"start {self.start} beyond {available} frames")
            return idx
        # the window covers T*stride consecutive frames, not just the last index
        if self.start + self.num_frames * self.stride > available:
            raise SamplingError(
                f"window start={self.start} T={self.num_frames} stride={self.stride} "
                f"needs {self.start + self.num_frames * self.stride} frames, "
                f"only {available} available")
        return self.start + self.stride * np.arange(self.num_frames)


@dataclass(frozen=True)
class ClipSource:
    kind: SourceKind
    path: Path
    sampling: FrameSampling = field(default_factory=FrameSampling)

    def __post_init__(self):
        object.__setattr__(self, "path", Path(self.path))


def _list_frame_files(directory: Path):
    files = sorted(p for p in directory.iterdir()
                   if p.suffix.lower() in (".pgm", ".ppm") and p.is_file())
    if not files:
        raise ClipIOError(f"{directory}: no PGM/PPM frames found")
    return files


def load_clip(src: ClipSource, value_range: ValueRange = ValueRange.UNIT,
              dtype=np.float32) -> VideoClip:
    """Load and subsample a clip, scaling pixel values to the declared range.

    Tensor files carry their own dtype and range; the arguments apply to
    frame directories only.  For frames: raw_u8 keeps 0..255, unit divides
    by 255, normalized additionally subtracts the per-channel mean.
    """
    if not src.path.exists():
        raise ClipIOError(f"{src.path}: no such file or directory")
    if src.kind is SourceKind.TENSOR_FILE:
        clip = load_tensor_file(src.path)
        idx = src.sampling.indices(clip.data.shape[0])
        if len(idx) == clip.data.shape[0] and np.array_equal(idx, np.arange(len(idx))):
            return clip
        return VideoClip(clip.data[idx], value_range=clip.value_range, fps=clip.fps)

    files = _list_frame_files(src.path)
    idx = src.sampling.indices(len(files))
    frames = []
    shape = None
    for i in idx:
        frame = read_image(files[int(i)])
        if shape is None:
            shape = frame.shape
        elif frame.shape != shape:
            raise InvalidShapeError(
                f"{files[int(i)]}: frame shape {frame.shape} differs from {shape}")
        frames.append(frame)
    data = np.stack(frames).astype(dtype)
    if value_range is ValueRange.RAW_U8:
        pass
    elif value_range is ValueRange.UNIT:
        data = data / dtype(255.0)
    else:
        data = data / dtype(255.0)
        data = data - data.mean(axis=(0, 1, 2), keepdims=True, dtype=dtype)
    return VideoClip(data, value_range=value_range)


class SaveFormat(enum.Enum):
    FRAME_DIR = "frame_dir"
    TENSOR_FILE = "tensor_file"
    DISPLAY_RESCALED_FRAMES = "display_rescaled_frames"


def display_rescale(clip: VideoClip) -> np.ndarray:
    """Affine map of the clip's own [min, max] onto 0..255 (uint8 frames)."""
    lo, hi = float(clip.data.min()), float(clip.data.max())
    if hi == lo:
        return np.full(clip.data.shape, GRAY_MIDPOINT, dtype=np.uint8)
    return np.rint((clip.data - lo) / (hi - lo) * 255.0).astype(np.uint8)


def _quantize_for_frames(clip: VideoClip) -> np.ndarray:
    if clip.value_range is ValueRange.RAW_U8:
        return np.rint(clip.data).astype(np.uint8)
    if clip.value_range is ValueRange.UNIT:
        return np.rint(clip.data * 255.0).astype(np.uint8)
    raise ClipIOError(
        "normalized clips cannot be written as plain frames losslessly; "
        "use the tensor format or display_rescaled_frames")


def _write_frame_dir(directory: Path, frames_u8: np.ndarray) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    suffix = ".ppm" if frames_u8.shape[-1] == 3 else ".pgm"
    for i, frame in enumerate(frames_u8):
        write_image(directory / f"{i:06d}{suffix}", frame)


def save_clip(clip: VideoClip, dst, fmt: SaveFormat = SaveFormat.TENSOR_FILE) -> None:
    dst = Path(dst)
    if fmt is SaveFormat.TENSOR_FILE:
        if dst.parent != Path("."):
            dst.parent.mkdir(parents=True, exist_ok=True)
        save_tensor_file(clip, dst)
    elif fmt is SaveFormat.FRAME_DIR:
        _write_frame_dir(dst, _quantize_for_frames(clip))
    else:
        _write_frame_dir(dst, display_rescale(clip))
