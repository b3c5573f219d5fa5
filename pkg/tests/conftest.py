"""Shared fixtures and independent oracles.

The oracles here evaluate transform definitions with explicit Python
loops.  They are deliberately slow and kept free of any package
internals so they can vouch for both the fast and the reference paths.
"""

import cmath

import numpy as np
import pytest

from freqaug import ValueRange, VideoClip


def unit_clip(shape, seed, dtype=np.float32):
    rng = np.random.default_rng(seed)
    return VideoClip(rng.random(shape, dtype=np.float64).astype(dtype),
                     value_range=ValueRange.UNIT)


def static_clip(t, frame_shape, seed, dtype=np.float32):
    """One random frame duplicated t times: all temporal energy at k_t=0."""
    rng = np.random.default_rng(seed)
    frame = rng.random(frame_shape).astype(dtype)
    return VideoClip(np.broadcast_to(frame, (t,) + frame_shape).copy(),
                     value_range=ValueRange.UNIT)


def noise_clip(shape, seed, dtype=np.float32):
    """Independent uniform noise per pixel per frame."""
    return unit_clip(shape, seed, dtype)


def loop_dft_1d(x, inverse=False):
    """Direct evaluation of the 1-D transform summation, pure Python."""
    x = list(x)
    n = len(x)
    sign = 1.0 if inverse else -1.0
    out = []
    for k in range(n):
        acc = 0j
        for i, xi in enumerate(x):
            acc += complex(xi) * cmath.exp(sign * 2j * cmath.pi * k * i / n)
        out.append(acc / n if inverse else acc)
    return np.array(out, dtype=np.complex128)


def loop_dft_3d(data):
    """Direct evaluation of the 3-D transform per channel, pure Python."""
    t, h, w, c = data.shape
    out = np.zeros((t, h, w, c), dtype=np.complex128)
    for ch in range(c):
        for kt in range(t):
            for kh in range(h):
                for kw in range(w):
                    acc = 0j
                    for it in range(t):
                        for ih in range(h):
                            for iw in range(w):
                                phase = kt * it / t + kh * ih / h + kw * iw / w
                                acc += data[it, ih, iw, ch] * cmath.exp(-2j * cmath.pi * phase)
                    out[kt, kh, kw, ch] = acc
    return out


def dense_gaussian_conv3d(volume, kernel3d):
    """Dense 3-D convolution with mirror padding, pure loops over outputs."""
    kt, kh, kw = kernel3d.shape
    pt, ph, pw = kt // 2, kh // 2, kw // 2
    padded = np.pad(volume, ((pt, pt), (ph, ph), (pw, pw)), mode="reflect")
    out = np.zeros_like(volume, dtype=np.float64)
    t, h, w = volume.shape
    for it in range(t):
        for ih in range(h):
            for iw in range(w):
                block = padded[it:it + kt, ih:ih + kh, iw:iw + kw]
                out[it, ih, iw] = float((block * kernel3d).sum())
    return out


def l2_relative_error(actual, expected):
    denom = np.linalg.norm(np.asarray(expected, dtype=np.complex128).ravel())
    if denom == 0:
        return float(np.linalg.norm(np.asarray(actual, dtype=np.complex128).ravel()))
    return float(np.linalg.norm((np.asarray(actual, dtype=np.complex128)
                                 - np.asarray(expected, dtype=np.complex128)).ravel()) / denom)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
