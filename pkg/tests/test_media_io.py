"""Clip IO: tensor files, portable image frames, sampling, display rescaling."""

import numpy as np
import pytest

from freqaug import (ClipIOError, ClipSource, FrameSampling, InvalidShapeError, SamplingError,
                     SaveFormat, SourceKind, ValueRange, VideoClip, display_rescale,
                     load_clip, load_tensor_file, new_clip, read_image, save_clip,
                     save_tensor_file, write_image)
from freqaug.augment import apply_freqaug, clip_stream, preset

from conftest import unit_clip


def _source(path, kind=SourceKind.TENSOR_FILE, **sampling):
    return ClipSource(kind, path, FrameSampling(**sampling))


class TestTensorFile:
    @pytest.mark.parametrize("dtype", [np.float32, np.float64])
    @pytest.mark.parametrize("fps", [None, 29.97])
    def test_exact_roundtrip(self, tmp_path, dtype, fps):
        clip = VideoClip(unit_clip((3, 5, 4, 3), seed=0, dtype=dtype).data,
                         value_range=ValueRange.UNIT, fps=fps)
        path = tmp_path / "clip.vclip"
        save_tensor_file(clip, path)
        back = load_tensor_file(path)
        assert back.data.dtype == clip.data.dtype
        assert np.array_equal(back.data, clip.data)
        assert back.value_range is clip.value_range
        assert back.fps == fps

    def test_value_range_preserved(self, tmp_path):
        clip = VideoClip(np.full((1, 2, 2, 1), -3.5, dtype=np.float32),
                         value_range=ValueRange.NORMALIZED)
        save_tensor_file(clip, tmp_path / "n.vclip")
        assert load_tensor_file(tmp_path / "n.vclip").value_range is ValueRange.NORMALIZED

    def test_bad_magic_rejected(self, tmp_path):
        path = tmp_path / "junk.vclip"
        path.write_bytes(b"NOPE" + b"\x00" * 60)
        with pytest.raises(ClipIOError):
            load_tensor_file(path)

    def test_truncated_payload_rejected(self, tmp_path):
        clip = unit_clip((2, 4, 4, 1), seed=1)
        path = tmp_path / "t.vclip"
        save_tensor_file(clip, path)
        path.write_bytes(path.read_bytes()[:-8])
        with pytest.raises(ClipIOError):
            load_tensor_file(path)


class TestPortableImages:
    def test_gray_roundtrip(self, tmp_path):
        img = np.arange(35, dtype=np.uint8).reshape(5, 7)
        write_image(tmp_path / "g.pgm", img)
        back = read_image(tmp_path / "g.pgm")
        assert back.shape == (5, 7, 1)
        assert np.array_equal(back[..., 0], img)

    def test_color_roundtrip(self, tmp_path):
        rng = np.random.default_rng(2)
        img = rng.integers(0, 256, size=(4, 6, 3), dtype=np.uint8)
        write_image(tmp_path / "c.ppm", img)
        assert np.array_equal(read_image(tmp_path / "c.ppm"), img)

    def test_non_image_rejected(self, tmp_path):
        (tmp_path / "x.pgm").write_bytes(b"hello world")
        with pytest.raises(ClipIOError):
            read_image(tmp_path / "x.pgm")


class TestFrameDir:
    def _write_frames(self, directory, count, shape=(6, 8, 3), seed=3):
        rng = np.random.default_rng(seed)
        data = rng.integers(0, 256, size=(count,) + shape, dtype=np.uint8)
        clip = VideoClip(data.astype(np.float32), value_range=ValueRange.RAW_U8)
        save_clip(clip, directory, SaveFormat.FRAME_DIR)
        return data

    def test_u8_roundtrip(self, tmp_path):
        data = self._write_frames(tmp_path / "clip", 4)
        back = load_clip(_source(tmp_path / "clip", SourceKind.FRAME_DIR),
                         value_range=ValueRange.RAW_U8)
        assert np.array_equal(back.data, data.astype(np.float32))

    def test_unit_scaling(self, tmp_path):
        data = self._write_frames(tmp_path / "clip", 2)
        back = load_clip(_source(tmp_path / "clip", SourceKind.FRAME_DIR))
        assert back.value_range is ValueRange.UNIT
        assert np.allclose(back.data, data / 255.0, atol=1e-7)

    def test_normalized_scaling_zero_mean(self, tmp_path):
        self._write_frames(tmp_path / "clip", 3)
        back = load_clip(_source(tmp_path / "clip", SourceKind.FRAME_DIR),
                         value_range=ValueRange.NORMALIZED)
        means = back.data.mean(axis=(0, 1, 2))
        assert np.max(np.abs(means)) < 1e-5

    def test_strided_sampling_8x8(self, tmp_path):
        data = self._write_frames(tmp_path / "clip", 64)
        back = load_clip(_source(tmp_path / "clip", SourceKind.FRAME_DIR,
                                 num_frames=8, stride=8),
                         value_range=ValueRange.RAW_U8)
        assert np.array_equal(back.data, data[np.arange(0, 64, 8)].astype(np.float32))

    def test_strided_sampling_16x4(self, tmp_path):
        data = self._write_frames(tmp_path / "clip", 64)
        back = load_clip(_source(tmp_path / "clip", SourceKind.FRAME_DIR,
                                 num_frames=16, stride=4),
                         value_range=ValueRange.RAW_U8)
        assert back.data.shape[0] == 16
        assert np.array_equal(back.data, data[np.arange(0, 64, 4)].astype(np.float32))

    def test_infeasible_window_rejected(self, tmp_path):
        self._write_frames(tmp_path / "clip", 60)
        with pytest.raises(SamplingError):
            load_clip(_source(tmp_path / "clip", SourceKind.FRAME_DIR,
                              num_frames=8, stride=8))

    def test_inconsistent_frame_shapes_rejected(self, tmp_path):
        d = tmp_path / "clip"
        d.mkdir()
        write_image(d / "000000.pgm", np.zeros((4, 4), dtype=np.uint8))
        write_image(d / "000001.pgm", np.zeros((4, 5), dtype=np.uint8))
        with pytest.raises(InvalidShapeError):
            load_clip(_source(d, SourceKind.FRAME_DIR))

    def test_missing_path_rejected(self, tmp_path):
        with pytest.raises(ClipIOError):
            load_clip(_source(tmp_path / "nope", SourceKind.FRAME_DIR))

    def test_tensor_source_sampling(self, tmp_path):
        clip = unit_clip((8, 4, 4, 1), seed=4)
        save_tensor_file(clip, tmp_path / "c.vclip")
        back = load_clip(_source(tmp_path / "c.vclip", num_frames=4, stride=2))
        assert np.array_equal(back.data, clip.data[[0, 2, 4, 6]])


class TestDisplayRescale:
    def test_zero_clip_renders_midgray(self):
        frames = display_rescale(new_clip((2, 3, 3, 1), 0.0))
        assert np.all(frames == 128)

    def test_filtered_clip_spans_full_range(self, tmp_path):
        clip = unit_clip((8, 8, 8, 1), seed=5)
        res = apply_freqaug(clip, preset("freqaug_t", p=1.0), clip_stream(0, "z"))
        save_clip(res.clip, tmp_path / "disp", SaveFormat.DISPLAY_RESCALED_FRAMES)
        frames = [read_image(p) for p in sorted((tmp_path / "disp").iterdir())]
        stack = np.stack(frames)
        assert stack.min() == 0 and stack.max() == 255

    def test_normalized_plain_frames_rejected(self, tmp_path):
        clip = VideoClip(np.full((1, 2, 2, 1), -1.0, dtype=np.float32),
                         value_range=ValueRange.NORMALIZED)
        with pytest.raises(ClipIOError):
            save_clip(clip, tmp_path / "frames", SaveFormat.FRAME_DIR)

    def test_unit_frames_quantized(self, tmp_path):
        clip = new_clip((1, 2, 2, 1), 0.5)
        save_clip(clip, tmp_path / "q", SaveFormat.FRAME_DIR)
        img = read_image(next((tmp_path / "q").iterdir()))
        assert np.all(img == 128)  # round(0.5 * 255)
