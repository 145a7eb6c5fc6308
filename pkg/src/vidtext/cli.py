"""Command-line front end.

Subcommands mirror the pipeline stages (each runnable standalone on the
previous stage's dump) plus batch detection, evaluation, and corpus
generation. Settings resolve as: built-in defaults, then ``--config``
file entries (flat ``key = value`` lines), then explicit flags.

Exit codes: 0 success, 1 stage or file error, 2 bad arguments.
"""
from __future__ import annotations

import argparse
import csv
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .binarize import kmeans2
from .enhance import channel_fuse, sharpen, sharpen_trace
from .evaluate import (
    DET_SUFFIX,
    GT_SUFFIX,
    block_metrics,
    match_blocks,
    read_boxes,
    write_boxes,
)
from .morphology import text_candidates
from .pipeline import (
    PipelineConfig,
    PipelineStageError,
    dump_intermediates,
    overlay_blocks,
    run_stages,
)
from .raster import ImageFormatError, load_gray, load_image, save_gray, save_mask, save_rgb
from .stroke import sobel, symmetry_widths
from .synth import gen_corpus

_F_NOTE = (
    "The F column is always recomputed as 2*R*P/(R+P) from the printed R\n"
    "and P; it is never carried over from another source. For example\n"
    "R=0.85, P=0.84 gives F=0.8450 to four places. Summaries that quote\n"
    "F=0.82 for those same rates used some other aggregation and cannot\n"
    "be reproduced by this formula."
)

_CONFIG_ALIASES = {
    "sym_tol": "symmetry_tol",
    "spacing": "spacing_factor",
    "direction": "direction_mode",
}
_INT_KEYS = {"window", "passes", "kmeans_max_iters", "min_component_pixels"}
_FLOAT_KEYS = {"kmeans_tol", "symmetry_tol", "spacing_factor", "coverage"}
_OPT_FLOAT_KEYS = {"max_ray", "edge_threshold"}
_STR_KEYS = {"ray_mode", "direction_mode"}
_DIRECTIONS = {
    "h": "horizontal",
    "horizontal": "horizontal",
    "nn": "nearest",
    "nearest": "nearest",
    "nearest-neighbor": "nearest",
}


class CliUsageError(Exception):
    pass


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.handler(args) or 0
    except CliUsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PipelineStageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ImageFormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vidtext",
        description="Detect and evaluate text blocks in video frames.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enhance", help="fuse RGB channels to a contrast image")
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(handler=_cmd_enhance)

    p = sub.add_parser("sharpen", help="window-sharpen a grayscale image")
    p.add_argument("input")
    p.add_argument("output")
    _add_config_flag(p)
    p.add_argument("--window", type=int, default=None, help="odd window size >= 3")
    p.add_argument("--passes", type=int, default=None, help="number of sweeps")
    p.add_argument(
        "--trace-dir",
        default=None,
        help="also dump one numbered PGM snapshot per window position",
    )
    p.set_defaults(handler=_cmd_sharpen)

    p = sub.add_parser("binarize", help="split intensities into text/background")
    p.add_argument("input")
    p.add_argument("output", help="text mask written as 0/255 PGM")
    _add_config_flag(p)
    p.set_defaults(handler=_cmd_binarize)

    p = sub.add_parser(
        "candidates", help="thin a text mask and keep loop-bearing components"
    )
    p.add_argument("input", help="text mask (0/255)")
    _add_config_flag(p)
    p.add_argument("--skeleton-out", default=None, help="write the skeleton mask")
    p.add_argument(
        "--candidates-out", default=None, help="write the candidate-only mask"
    )
    p.set_defaults(handler=_cmd_candidates)

    p = sub.add_parser(
        "verify", help="stroke-width symmetry check on candidate components"
    )
    p.add_argument("--enhanced", required=True, help="enhanced grayscale image")
    p.add_argument("--mask", required=True, help="text mask (0/255)")
    _add_config_flag(p)
    p.add_argument("--sym-tol", type=float, default=None, help="width tolerance")
    p.add_argument("--out", default=None, help="write the representatives mask")
    p.add_argument("--csv", default=None, help="write component,d1,d2,pass rows")
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("detect", help="run the full pipeline on frames")
    p.add_argument("frames", nargs="+", help="input frame files")
    p.add_argument("--out", required=True, help="directory for detection files")
    _add_config_flag(p)
    p.add_argument("--window", type=int, default=None)
    p.add_argument("--passes", type=int, default=None)
    p.add_argument("--sym-tol", type=float, default=None)
    p.add_argument("--spacing", type=float, default=None, help="spacing factor")
    p.add_argument(
        "--direction",
        choices=sorted(_DIRECTIONS),
        default=None,
        help="growth direction mode (h = horizontal, nn = nearest neighbor)",
    )
    p.add_argument("--dump", default=None, help="dump intermediates per frame here")
    p.add_argument("--overlay", action="store_true", help="write overlay PNGs")
    p.add_argument("--jobs", type=int, default=1, help="frames processed in parallel")
    p.set_defaults(handler=_cmd_detect)

    p = sub.add_parser(
        "evaluate",
        help="score detection files against ground truth",
        epilog=_F_NOTE,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("--det", required=True, help=f"directory of *{DET_SUFFIX} files")
    p.add_argument("--gt", required=True, help=f"directory of *{GT_SUFFIX} files")
    _add_config_flag(p)
    p.add_argument(
        "--coverage",
        type=float,
        default=None,
        help="fraction of a GT box a detection must cover (default 0.9)",
    )
    p.add_argument("--csv", default=None, help="also write the table as CSV")
    p.set_defaults(handler=_cmd_evaluate)

    p = sub.add_parser("gen-corpus", help="generate synthetic frames with GT")
    p.add_argument("out_dir")
    p.add_argument("--count", type=int, default=20, help="number of frames")
    p.add_argument("--seed", type=int, default=0, help="generator seed")
    p.add_argument("--size", default="320x240", help="frame size as WxH")
    p.set_defaults(handler=_cmd_gen_corpus)

    return parser


def _add_config_flag(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--config",
        default=None,
        help="flat 'key = value' settings file (flags still win)",
    )


def _read_config(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliUsageError(f"cannot read config file: {exc}") from exc
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliUsageError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        key = _CONFIG_ALIASES.get(key, key)
        value = value.strip()
        known = _INT_KEYS | _FLOAT_KEYS | _OPT_FLOAT_KEYS | _STR_KEYS
        if key not in known:
            raise CliUsageError(f"{path}:{lineno}: unknown setting {key!r}")
        values[key] = _coerce(key, value, f"{path}:{lineno}")
    return values


def _coerce(key: str, value: str, where: str):
    try:
        if key in _INT_KEYS:
            return int(value)
        if key in _FLOAT_KEYS:
            return float(value)
        if key in _OPT_FLOAT_KEYS:
            return None if value.lower() in ("", "none", "auto") else float(value)
    except ValueError:
        raise CliUsageError(f"{where}: bad value for {key}: {value!r}") from None
    if key == "direction_mode":
        return _parse_direction(value, where)
    return value


def _parse_direction(value: str, where: str) -> str:
    try:
        return _DIRECTIONS[value]
    except KeyError:
        raise CliUsageError(
            f"{where}: direction must be one of {sorted(_DIRECTIONS)}"
        ) from None


def _resolve_settings(args) -> dict:
    """defaults -> config file -> flags, as a flat settings dict."""
    settings = asdict(PipelineConfig())
    settings["coverage"] = 0.9
    if getattr(args, "config", None):
        settings.update(_read_config(args.config))
    flag_map = {
        "window": "window",
        "passes": "passes",
        "sym_tol": "symmetry_tol",
        "spacing": "spacing_factor",
        "coverage": "coverage",
    }
    for flag, key in flag_map.items():
        value = getattr(args, flag, None)
        if value is not None:
            settings[key] = value
    direction = getattr(args, "direction", None)
    if direction is not None:
        settings["direction_mode"] = _DIRECTIONS[direction]
    return settings


def _pipeline_config(settings: dict) -> PipelineConfig:
    kwargs = {k: settings[k] for k in PipelineConfig.field_names()}
    try:
        cfg = PipelineConfig(**kwargs).validate()
    except ValueError as exc:
        raise CliUsageError(str(exc)) from exc
    return cfg


def _cmd_enhance(args) -> int:
    save_gray(channel_fuse(load_image(args.input)), args.output)
    return 0


def _cmd_sharpen(args) -> int:
    cfg = _pipeline_config(_resolve_settings(args))
    img = load_gray(args.input)
    if args.trace_dir:
        trace = sharpen_trace(img, cfg.window, cfg.passes)
        trace_dir = Path(args.trace_dir)
        trace_dir.mkdir(parents=True, exist_ok=True)
        for i, snap in enumerate(trace.snapshots):
            save_gray(snap, trace_dir / f"{i:05d}.pgm")
        result = trace.result
    else:
        result = sharpen(img, cfg.window, cfg.passes)
    save_gray(result, args.output)
    return 0


def _cmd_binarize(args) -> int:
    cfg = _pipeline_config(_resolve_settings(args))
    result = kmeans2(load_gray(args.input), cfg.kmeans_max_iters, cfg.kmeans_tol)
    if result.degenerate:
        print("warning: constant image, mask is empty", file=sys.stderr)
    save_mask(result.mask, args.output)
    return 0


def _cmd_candidates(args) -> int:
    cfg = _pipeline_config(_resolve_settings(args))
    mask = load_gray(args.input) != 0
    cands = text_candidates(mask, cfg.min_component_pixels)
    if args.skeleton_out:
        save_mask(cands.skeleton, args.skeleton_out)
    if args.candidates_out:
        save_mask(_union_mask(cands.candidates, mask.shape), args.candidates_out)
    if not cands.candidates:
        print("warning: no text candidates found", file=sys.stderr)
    print(f"{len(cands.candidates)} candidate(s), {len(cands.rejected)} rejected")
    return 0


def _cmd_verify(args) -> int:
    cfg = _pipeline_config(_resolve_settings(args))
    enhanced = load_gray(args.enhanced)
    mask = load_gray(args.mask) != 0
    cands = text_candidates(mask, cfg.min_component_pixels)
    grad = sobel(enhanced)
    rows = []
    representatives = []
    for comp in cands.candidates:
        d1, d2 = symmetry_widths(comp, grad, mask, cfg.max_ray, cfg.ray_mode)
        passed = (
            d1 is not None and d2 is not None and abs(d1 - d2) <= cfg.symmetry_tol
        )
        rows.append((comp.id, d1, d2, passed))
        if passed:
            representatives.append(comp)
    if args.out:
        save_mask(_union_mask(representatives, mask.shape), args.out)
    if args.csv:
        with open(args.csv, "w", newline="", encoding="ascii") as fh:
            writer = csv.writer(fh)
            writer.writerow(["component", "d1", "d2", "pass"])
            for comp_id, d1, d2, passed in rows:
                writer.writerow(
                    [
                        comp_id,
                        "" if d1 is None else d1,
                        "" if d2 is None else d2,
                        int(passed),
                    ]
                )
    print(f"{len(representatives)} of {len(cands.candidates)} candidate(s) verified")
    return 0


def _union_mask(components, shape):
    mask = np.zeros(shape, dtype=bool)
    for comp in components:
        mask[comp.pixels[:, 1], comp.pixels[:, 0]] = True
    return mask


def _frame_stem(path: Path) -> str:
    return path.stem


def _detect_one(path_str: str, cfg_kwargs: dict, out_dir: str, dump_root, overlay):
    path = Path(path_str)
    cfg = PipelineConfig(**cfg_kwargs)
    frame = load_image(path)
    result = run_stages(frame, cfg)
    stem = _frame_stem(path)
    out = Path(out_dir)
    write_boxes(out / f"{stem}{DET_SUFFIX}", result.blocks)
    if dump_root:
        dump_intermediates(result, Path(dump_root) / stem)
    if overlay:
        save_rgb(overlay_blocks(frame, result.blocks), out / f"{stem}.overlay.png")
    return stem, len(result.blocks)


def _cmd_detect(args) -> int:
    if args.jobs < 1:
        raise CliUsageError(f"--jobs must be >= 1, got {args.jobs}")
    settings = _resolve_settings(args)
    cfg = _pipeline_config(settings)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cfg_kwargs = {k: getattr(cfg, k) for k in PipelineConfig.field_names()}
    tasks = [
        (str(p), cfg_kwargs, str(out), args.dump, args.overlay) for p in args.frames
    ]
    results = []
    if args.jobs == 1:
        for task in tasks:
            results.append(_detect_one(*task))
    else:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futures = [pool.submit(_detect_one, *task) for task in tasks]
            results = [f.result() for f in futures]
    for stem, count in sorted(results):
        print(f"{stem}: {count} block(s)")
    return 0


def _cmd_evaluate(args) -> int:
    settings = _resolve_settings(args)
    coverage = settings["coverage"]
    if not 0 < coverage <= 1:
        raise CliUsageError(f"coverage must be in (0, 1], got {coverage}")
    det_dir = Path(args.det)
    gt_dir = Path(args.gt)
    if not det_dir.is_dir():
        raise CliUsageError(f"not a directory: {det_dir}")
    if not gt_dir.is_dir():
        raise CliUsageError(f"not a directory: {gt_dir}")
    det_stems = {
        p.name[: -len(DET_SUFFIX)]: p for p in det_dir.glob(f"*{DET_SUFFIX}")
    }
    gt_stems = {p.name[: -len(GT_SUFFIX)]: p for p in gt_dir.glob(f"*{GT_SUFFIX}")}
    stems = sorted(set(det_stems) | set(gt_stems))
    if not stems:
        raise CliUsageError("no detection or ground-truth files found")

    rows = []
    total_tdb = total_fdb = total_atb = 0
    for stem in stems:
        detected = read_boxes(det_stems[stem]) if stem in det_stems else []
        truth = read_boxes(gt_stems[stem]) if stem in gt_stems else []
        verdicts = match_blocks(detected, truth, coverage)
        tdb = sum(verdicts)
        fdb = len(verdicts) - tdb
        m = block_metrics(tdb=tdb, fdb=fdb, atb=len(truth))
        rows.append((stem, m))
        total_tdb += tdb
        total_fdb += fdb
        total_atb += len(truth)
    total = block_metrics(tdb=total_tdb, fdb=total_fdb, atb=total_atb)
    rows.append(("TOTAL", total))

    header = f"{'frame':<20} {'ATB':>4} {'TDB':>4} {'FDB':>4} {'R':>7} {'P':>7} {'F':>7}"
    print(header)
    for name, m in rows:
        print(
            f"{name:<20} {m.atb:>4d} {m.tdb:>4d} {m.fdb:>4d} "
            f"{m.recall:>7.4f} {m.precision:>7.4f} {m.fmeasure:>7.4f}"
        )
    if args.csv:
        with open(args.csv, "w", newline="", encoding="ascii") as fh:
            writer = csv.writer(fh)
            writer.writerow(["frame", "atb", "tdb", "fdb", "r", "p", "f"])
            for name, m in rows:
                writer.writerow(
                    [
                        name,
                        m.atb,
                        m.tdb,
                        m.fdb,
                        f"{m.recall:.4f}",
                        f"{m.precision:.4f}",
                        f"{m.fmeasure:.4f}",
                    ]
                )
    return 0


def _cmd_gen_corpus(args) -> int:
    try:
        w, _, h = args.size.lower().partition("x")
        size = (int(w), int(h))
    except ValueError:
        raise CliUsageError(f"bad --size {args.size!r}, expected WxH") from None
    if args.count < 1:
        raise CliUsageError(f"--count must be >= 1, got {args.count}")
    paths = gen_corpus(args.out_dir, args.count, args.seed, size)
    print(f"wrote {len(paths)} frame(s) to {args.out_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
