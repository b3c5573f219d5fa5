"""Batch command-line tool: filter, augment, analyze, render-spectrum.

Every stochastic run is reproducible: each clip gets the counter-based
stream ``Philox(seed XOR stable_hash64(clip_id))``, so outputs and
manifests are byte-identical across reruns and across any ``--jobs``
setting.  Manifest and table rows always follow input order.
"""

from __future__ import annotations

import argparse
import logging
import multiprocessing
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import analytics
from .augment import (FreqAugConfig, ViewSelection, apply_freqaug, apply_two_view,
                      clip_stream, preset, PRESET_NAMES)
from .baselines import GaussianDims, GaussianHpfSpec
from .core import ValueRange, VideoClip
from .errors import ConfigError, FreqAugError
from .filters import Band, BandSpec, FilterSpec, RandomMaskSpec, normalized_frequency
from .media_io import (ClipSource, FrameSampling, SaveFormat, SourceKind, TENSOR_SUFFIX,
                       load_clip, save_clip, write_image)

log = logging.getLogger(__name__)

RESOLVED_CONFIG_NAME = "resolved_config.txt"


# ---------------------------------------------------------------------------
# config file handling: flat key=value text, overridden by command-line flags

def read_config_file(path) -> Dict[str, str]:
    values: Dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


def write_resolved_config(outdir: Path, args: argparse.Namespace) -> None:
    skip = {"config", "func"}
    lines = []
    for key in sorted(vars(args)):
        if key in skip:
            continue
        value = getattr(args, key)
        if isinstance(value, (list, tuple)):
            value = ",".join(str(v) for v in value)
        lines.append(f"{key}={value}")
    (outdir / RESOLVED_CONFIG_NAME).write_text("\n".join(lines) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# clip discovery

def _dir_holds_frames(path: Path) -> bool:
    return any(p.suffix.lower() in (".pgm", ".ppm") for p in path.iterdir())


def discover_clips(inputs: Sequence[str], sampling: FrameSampling) -> List[Tuple[str, ClipSource]]:
    """Resolve input paths into (clip_id, source) pairs.

    Explicitly listed inputs keep their given order; directory contents
    are walked in sorted order.  Manifest rows follow this order.
    """
    found: Dict[str, ClipSource] = {}

    def add(clip_id: str, source: ClipSource):
        if clip_id in found:
            raise ConfigError(f"duplicate clip id {clip_id!r}")
        found[clip_id] = source

    for raw in inputs:
        path = Path(raw)
        if path.is_file() and path.suffix == TENSOR_SUFFIX:
            add(path.stem, ClipSource(SourceKind.TENSOR_FILE, path, sampling))
        elif path.is_dir():
            if _dir_holds_frames(path):
                add(path.name, ClipSource(SourceKind.FRAME_DIR, path, sampling))
                continue
            for child in sorted(path.iterdir()):
                if child.is_file() and child.suffix == TENSOR_SUFFIX:
                    add(child.stem, ClipSource(SourceKind.TENSOR_FILE, child, sampling))
                elif child.is_dir() and _dir_holds_frames(child):
                    add(child.name, ClipSource(SourceKind.FRAME_DIR, child, sampling))
        else:
            raise ConfigError(f"{raw}: not a clip tensor file or directory")
    if not found:
        raise ConfigError("no clips found under the given inputs")
    return list(found.items())


def build_filter_spec(args) -> object:
    """Translate filter flags into a spec; exactly one filter family."""
    chosen = [name for name, on in (
        ("--preset", args.preset is not None),
        ("--fco-t/--fco-s", args.fco_t is not None or args.fco_s is not None),
        ("--random-mask-M", args.random_mask_M is not None),
        ("--gaussian", args.gaussian is not None)) if on]
    if len(chosen) > 1:
        raise ConfigError(f"conflicting filter options: {', '.join(chosen)}")
    if args.preset is not None:
        return preset(args.preset).filter
    if args.random_mask_M is not None:
        if args.num_frames is None:
            raise ConfigError("--random-mask-M needs --num-frames to fix the mask length")
        return RandomMaskSpec(M=args.random_mask_M, T=args.num_frames)
    if args.gaussian is not None:
        try:
            k_str, sigma_str, dims_str = args.gaussian.split(",")
            return GaussianHpfSpec(kernel_size=int(k_str), sigma=float(sigma_str),
                                   dims=GaussianDims(dims_str))
        except ValueError as exc:
            raise ConfigError(f"--gaussian expects K,SIGMA,{{2d|3d}}: {exc}") from None
    band = Band.HIGH_PASS if args.band == "hpf" else Band.LOW_PASS
    temporal = BandSpec(band, args.fco_t) if args.fco_t is not None else None
    spatial = BandSpec(band, args.fco_s) if args.fco_s is not None else None
    if temporal is None and spatial is None:
        raise ConfigError("choose a filter: --preset, --fco-t/--fco-s, "
                          "--random-mask-M or --gaussian")
    return FilterSpec(temporal=temporal, spatial=spatial)


# ---------------------------------------------------------------------------
# per-clip work, executed serially or in a worker pool

@dataclass(frozen=True)
class ClipJob:
    clip_id: str
    source: ClipSource
    outdir: Path
    cfg: Optional[FreqAugConfig] = None
    seed: int = 0
    value_range: ValueRange = ValueRange.UNIT
    out_format: SaveFormat = SaveFormat.TENSOR_FILE
    two_view: bool = False
    views: ViewSelection = ViewSelection.BOTH
    render: bool = False
    slices: Optional[Tuple[int, ...]] = None


def _save_output(clip: VideoClip, outdir: Path, clip_id: str, fmt: SaveFormat) -> str:
    if fmt is SaveFormat.TENSOR_FILE:
        rel = clip_id + TENSOR_SUFFIX
    else:
        rel = clip_id
    save_clip(clip, outdir / rel, fmt)
    return rel


def _render_outputs(clip: VideoClip, outdir: Path, clip_id: str,
                    slices: Optional[Tuple[int, ...]]) -> None:
    render = analytics.render_spectrum(clip, slices)
    target = outdir / f"{clip_id}_spectrum"
    target.mkdir(parents=True, exist_ok=True)
    for k_t, image in sorted(render.slice_images.items()):
        write_image(target / f"slice_{k_t:03d}.pgm", image)
    write_image(target / "tprofile.pgm", render.profile_image)
    n = len(render.profile)
    rows = [(str(k), analytics.format_float(normalized_frequency(k, n)),
             analytics.format_float(v))
            for k, v in enumerate(render.profile)]
    analytics.write_table(target / "tprofile.tsv",
                          ("k_t", "frequency", "mean_log_amplitude"), rows)


def run_filter_job(job: ClipJob) -> Tuple[str, List[str], str]:
    try:
        clip = load_clip(job.source, value_range=job.value_range)
        rng = clip_stream(job.seed, job.clip_id)
        result = apply_freqaug(clip, job.cfg, rng)
        rel = _save_output(result.clip, job.outdir, job.clip_id, job.out_format)
        if job.render:
            _render_outputs(result.clip, job.outdir, job.clip_id, job.slices)
        return job.clip_id, [rel], ""
    except (FreqAugError, OSError) as exc:
        return job.clip_id, [], f"{type(exc).__name__}: {exc}"


def run_augment_job(job: ClipJob) -> Tuple[str, List[str], str]:
    try:
        clip = load_clip(job.source, value_range=job.value_range)
        rng = clip_stream(job.seed, job.clip_id)
        if job.two_view:
            res = apply_two_view(clip, clip, job.cfg, rng, job.views)
            rel1 = _save_output(res.view1.clip, job.outdir / "view1", job.clip_id,
                                job.out_format)
            rel2 = _save_output(res.view2.clip, job.outdir / "view2", job.clip_id,
                                job.out_format)
            fields = [_flag(res.view1.applied), _draw(res.view1.draw),
                      _flag(res.view2.applied), _draw(res.view2.draw),
                      "view1/" + rel1, "view2/" + rel2]
        else:
            res = apply_freqaug(clip, job.cfg, rng)
            rel = _save_output(res.clip, job.outdir, job.clip_id, job.out_format)
            fields = [_flag(res.applied), _draw(res.draw), rel]
        return job.clip_id, fields, ""
    except (FreqAugError, OSError) as exc:
        return job.clip_id, [], f"{type(exc).__name__}: {exc}"


def run_analyze_job(job: ClipJob) -> Tuple[str, List[str], str]:
    try:
        clip = load_clip(job.source, value_range=job.value_range)
        stats = analytics.compute_stats(clip)
        return job.clip_id, list(analytics.stats_row(job.clip_id, clip, stats)), ""
    except (FreqAugError, OSError) as exc:
        return job.clip_id, [], f"{type(exc).__name__}: {exc}"


def run_render_job(job: ClipJob) -> Tuple[str, List[str], str]:
    try:
        clip = load_clip(job.source, value_range=job.value_range)
        _render_outputs(clip, job.outdir, job.clip_id, job.slices)
        return job.clip_id, [job.clip_id + "_spectrum"], ""
    except (FreqAugError, OSError) as exc:
        return job.clip_id, [], f"{type(exc).__name__}: {exc}"


def _flag(value: bool) -> str:
    return "true" if value else "false"


def _draw(value: Optional[float]) -> str:
    return "" if value is None else repr(float(value))


def run_jobs(worker, jobs: Sequence[ClipJob], n_workers: int, keep_going: bool):
    """Run per-clip jobs, preserving input order in the results."""
    results = []
    if n_workers <= 1:
        iterator = map(worker, jobs)
    else:
        pool = multiprocessing.get_context("fork").Pool(n_workers)
        iterator = pool.imap(worker, jobs, chunksize=1)
    try:
        for clip_id, fields, error in iterator:
            if error and not keep_going:
                raise RuntimeError(f"{clip_id}: {error} (use --keep-going to skip failures)")
            if error:
                log.warning("%s failed: %s", clip_id, error)
            results.append((clip_id, fields, error))
    finally:
        if n_workers > 1:
            pool.terminate()
            pool.join()
    return results


# ---------------------------------------------------------------------------
# commands

def _common_jobs(args, cfg: Optional[FreqAugConfig]) -> List[ClipJob]:
    sampling = FrameSampling(num_frames=args.num_frames, stride=args.stride,
                             start=args.start)
    clips = discover_clips(args.inputs, sampling)
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    seed = args.seed if args.seed is not None else 0
    slices = None
    if getattr(args, "slices", None) not in (None, "all"):
        slices = tuple(int(s) for s in args.slices.split(","))
    return [ClipJob(clip_id=cid, source=src, outdir=outdir, cfg=cfg, seed=seed,
                    value_range=ValueRange(args.value_range),
                    out_format=SaveFormat(args.out_format),
                    two_view=getattr(args, "two_view", False),
                    views=ViewSelection(getattr(args, "views", "both")),
                    render=getattr(args, "render_spectra", False), slices=slices)
            for cid, src in clips]


def _require_seed(args, stochastic: bool) -> None:
    if stochastic and args.seed is None:
        raise ConfigError("--seed is mandatory for stochastic commands")


def cmd_filter(args) -> int:
    spec = build_filter_spec(args)
    _require_seed(args, isinstance(spec, RandomMaskSpec))
    cfg = FreqAugConfig(filter=spec, p=1.0, seed=args.seed or 0)
    jobs = _common_jobs(args, cfg)
    write_resolved_config(jobs[0].outdir, args)
    results = run_jobs(run_filter_job, jobs, args.jobs, args.keep_going)
    rows = [(cid, fields[0] if fields else "", err) for cid, fields, err in results]
    analytics.write_table(jobs[0].outdir / "manifest.tsv",
                          ("clip_id", "output", "error"), rows)
    return 0


def cmd_augment(args) -> int:
    spec = build_filter_spec(args)
    _require_seed(args, True)
    if args.p is None and args.preset is None:
        raise ConfigError("--p is required unless a preset supplies it")
    p = args.p if args.p is not None else 0.5
    cfg = FreqAugConfig(filter=spec, p=p, seed=args.seed)
    jobs = _common_jobs(args, cfg)
    write_resolved_config(jobs[0].outdir, args)
    results = run_jobs(run_augment_job, jobs, args.jobs, args.keep_going)
    if args.two_view:
        header = ("clip_id", "applied_1", "draw_1", "applied_2", "draw_2",
                  "output_1", "output_2", "error")
        blank = [""] * 6
    else:
        header = ("clip_id", "applied", "draw", "output", "error")
        blank = [""] * 3
    rows = [tuple([cid] + (fields if fields else blank) + [err])
            for cid, fields, err in results]
    analytics.write_table(jobs[0].outdir / "manifest.tsv", header, rows)
    return 0


def cmd_analyze(args) -> int:
    jobs = _common_jobs(args, None)
    outdir = jobs[0].outdir
    write_resolved_config(outdir, args)
    results = run_jobs(run_analyze_job, jobs, args.jobs, args.keep_going)
    rows = [tuple(fields) if fields else analytics.stats_row(cid, None, None, err)
            for cid, fields, err in results]
    analytics.write_table(outdir / "stats.tsv", analytics.STATS_COLUMNS, rows)

    good = [(cid, float(fields[1]), float(fields[2]))
            for cid, fields, err in results if not err]
    n_errors = len(results) - len(good)

    # sigma_t histogram with fixed-width bins from zero
    width = args.hist_bin_width
    hist_rows = []
    if good:
        sigmas = np.array([g[1] for g in good])
        n_bins_hist = int(np.floor(sigmas.max() / width)) + 1
        counts, edges = np.histogram(sigmas, bins=n_bins_hist,
                                     range=(0.0, n_bins_hist * width))
        hist_rows = [(analytics.format_float(edges[i]), analytics.format_float(edges[i + 1]),
                      str(int(c))) for i, c in enumerate(counts)]
    analytics.write_table(outdir / "histogram.tsv",
                          ("sigma_t_lo", "sigma_t_hi", "count"), hist_rows)

    binning = None
    if good:
        n_bins = min(args.n_bins, len(good))
        binning = analytics.bin_dataset_by_lfc([(g[0], g[2]) for g in good], n_bins)
        bin_rows = [(cid, analytics.format_float(ratio), str(binning.membership[cid]))
                    for cid, _sig, ratio in good]
        analytics.write_table(outdir / "binning.tsv",
                              ("clip_id", "lfc_ratio", "bin"), bin_rows)

    below = sum(1 for g in good if g[1] < args.sigma_t_threshold)
    summary = [("n_clips", str(len(results))),
               ("n_errors", str(n_errors)),
               ("sigma_t_threshold", analytics.format_float(args.sigma_t_threshold)),
               ("n_below_threshold", str(below)),
               ("n_at_or_above_threshold", str(len(good) - below))]
    if binning is not None:
        summary.append(("lfc_bin_sizes", ",".join(str(s) for s in binning.sizes)))
        summary.append(("lfc_bin_edges",
                        ",".join(analytics.format_float(e) for e in binning.bin_edges)))
    analytics.write_table(outdir / "summary.tsv", ("key", "value"), summary)
    return 0


def cmd_render(args) -> int:
    jobs = _common_jobs(args, None)
    write_resolved_config(jobs[0].outdir, args)
    results = run_jobs(run_render_job, jobs, args.jobs, args.keep_going)
    rows = [(cid, fields[0] if fields else "", err) for cid, fields, err in results]
    analytics.write_table(jobs[0].outdir / "manifest.tsv",
                          ("clip_id", "output", "error"), rows)
    return 0


# ---------------------------------------------------------------------------
# argument parsing

def _add_io_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("inputs", nargs="+", help="clip tensor files, frame dirs, "
                                               "or directories of either")
    sub.add_argument("-o", "--output", required=True, help="output directory")
    sub.add_argument("--config", help="flat key=value config file; flags override it")
    sub.add_argument("--seed", type=int, default=None, help="base RNG seed")
    sub.add_argument("--jobs", type=int, default=os.cpu_count(),
                     help="parallel workers (default: all cores)")
    sub.add_argument("--keep-going", action="store_true",
                     help="report per-clip failures and continue")
    sub.add_argument("--value-range", choices=[v.value for v in ValueRange],
                     default="unit", help="value range for frame-dir inputs")
    sub.add_argument("--num-frames", type=int, default=None,
                     help="frames per clip (strided sampling)")
    sub.add_argument("--stride", type=int, default=1, help="frame sampling stride")
    sub.add_argument("--start", type=int, default=0, help="first sampled frame index")


def _add_filter_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--preset", choices=PRESET_NAMES, default=None)
    sub.add_argument("--band", choices=["hpf", "lpf"], default="hpf")
    sub.add_argument("--fco-t", type=float, default=None, help="temporal cutoff (0, 0.5]")
    sub.add_argument("--fco-s", type=float, default=None, help="spatial cutoff (0, 0.5]")
    sub.add_argument("--random-mask-M", type=int, default=None,
                     help="random temporal mask parameter M")
    sub.add_argument("--gaussian", default=None, metavar="K,SIGMA,DIMS",
                     help="Gaussian high-pass baseline, e.g. 3,1.0,3d")
    sub.add_argument("--out-format", choices=[f.value for f in SaveFormat],
                     default="tensor_file")


def build_parser() -> Tuple[argparse.ArgumentParser, Dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(
        prog="freqaug",
        description="Frequency-domain filtering and augmentation for video clips")
    subs = parser.add_subparsers(dest="command", required=True)

    p_filter = subs.add_parser("filter", help="apply the configured filter to every clip")
    _add_io_options(p_filter)
    _add_filter_options(p_filter)
    p_filter.add_argument("--render-spectra", action="store_true",
                          help="also write spectrum renderings per clip")
    p_filter.add_argument("--slices", default="all",
                          help="temporal slices to render: 'all' or comma list")
    p_filter.set_defaults(func=cmd_filter)

    p_aug = subs.add_parser("augment", help="stochastically augment every clip")
    _add_io_options(p_aug)
    _add_filter_options(p_aug)
    p_aug.add_argument("--p", type=float, default=None, help="application probability")
    p_aug.add_argument("--two-view", action="store_true",
                       help="emit two independently augmented views per clip")
    p_aug.add_argument("--views", choices=[v.value for v in ViewSelection],
                       default="both", help="which views receive augmentation")
    p_aug.set_defaults(func=cmd_augment)

    p_an = subs.add_parser("analyze", help="per-clip spectrum statistics and binning")
    _add_io_options(p_an)
    p_an.add_argument("--n-bins", type=int, default=4,
                      help="equal-count bins over the low-frequency ratio")
    p_an.add_argument("--sigma-t-threshold", type=float,
                      default=analytics.DEFAULT_SIGMA_T_THRESHOLD)
    p_an.add_argument("--hist-bin-width", type=float, default=0.01,
                      help="sigma_t histogram bin width")
    p_an.add_argument("--out-format", default="tensor_file", help=argparse.SUPPRESS)
    p_an.set_defaults(func=cmd_analyze)

    p_r = subs.add_parser("render-spectrum", help="write spectrum renderings per clip")
    _add_io_options(p_r)
    p_r.add_argument("--slices", default="all",
                     help="temporal slices to render: 'all' or comma list")
    p_r.add_argument("--out-format", default="tensor_file", help=argparse.SUPPRESS)
    p_r.set_defaults(func=cmd_render)
    return parser, {"filter": p_filter, "augment": p_aug,
                    "analyze": p_an, "render-spectrum": p_r}


_CONFIG_TYPES = {"seed": int, "jobs": int, "num_frames": int, "stride": int, "start": int,
                 "random_mask_M": int, "n_bins": int,
                 "p": float, "fco_t": float, "fco_s": float,
                 "sigma_t_threshold": float, "hist_bin_width": float,
                 "keep_going": None, "two_view": None, "render_spectra": None}


def _apply_config_file(sub: argparse.ArgumentParser, argv: Sequence[str]) -> None:
    """Install config-file values as subcommand defaults; flags still win."""
    probe = argparse.ArgumentParser(add_help=False)
    probe.add_argument("--config")
    known, _ = probe.parse_known_args(argv)
    if not known.config:
        return
    valid = {a.dest for a in sub._actions}  # noqa: SLF001
    overrides = {}
    for key, raw in read_config_file(known.config).items():
        if key not in valid:
            raise ConfigError(f"unknown config key {key!r}")
        caster = _CONFIG_TYPES.get(key, str)
        if caster is None:  # boolean flag
            overrides[key] = raw.lower() in ("1", "true", "yes", "on")
        else:
            overrides[key] = caster(raw)
    sub.set_defaults(**overrides)


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser, subparsers = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        if argv and argv[0] in subparsers:
            _apply_config_file(subparsers[argv[0]], argv[1:])
    except (FreqAugError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    args = parser.parse_args(argv)
    if args.jobs is None or args.jobs < 1:
        args.jobs = 1
    try:
        return args.func(args)
    except (FreqAugError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
