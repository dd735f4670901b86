"""Batch command-line interface.

Subcommands: ``image <in> <out>``, ``video <in> <out>``, ``bench <in>``.
Exit codes: 0 success, 1 usage error, 2 I/O or format error; every
failure prints a one-line diagnostic on stderr.
"""

from __future__ import annotations

import argparse
import sys

from .bench import (
    SYNTHETIC_KINDS,
    SyntheticSpec,
    compare,
    format_metrics,
    generate,
    jitter,
)
from .buffering import BufferPolicy
from .media import MediaFormatError, read_frames, write_frames
from .pipeline import MODES, RetargetConfig, retarget_image, retarget_video


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(
        prog="vidcarve",
        description="Content-aware image and video retargeting by seam carving.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    image = sub.add_parser("image", help="retarget a single image")
    image.add_argument("input", help="image file (.ppm, .pgm, .png) or '-' for stdin")
    image.add_argument("output", help="image file or '-' for stdout")
    _add_sizing(image)
    _add_tuning(image, default_mode="scpl")

    video = sub.add_parser("video", help="retarget a frame stream")
    video.add_argument("input", help="frame directory, concatenated .ppm, or '-' for stdin")
    video.add_argument("output", help="frame directory, .ppm, or '-' for stdout")
    _add_sizing(video)
    _add_tuning(video, default_mode="buffered")

    bench = sub.add_parser("bench", help="compare modes over a corpus and report metrics")
    bench.add_argument(
        "input",
        help=f"frame source, or a synthetic kind: {', '.join(SYNTHETIC_KINDS)}",
    )
    _add_sizing(bench)
    _add_tuning(bench, default_mode="buffered")
    bench.add_argument(
        "--modes",
        default=",".join(MODES),
        help="comma-separated modes to compare (default: all)",
    )
    bench.add_argument("--frames", type=int, default=32, help="synthetic corpus length")
    bench.add_argument("--size", default="320x240", help="synthetic frame size, WxH")
    bench.add_argument("--seed", type=int, default=0, help="synthetic corpus seed")
    bench.add_argument("--figures", metavar="DIR", help="render report figures into DIR")
    return parser


def _add_sizing(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--width", type=int, help="target width in pixels")
    sp.add_argument("--scale", type=float, help="target width as a fraction of source width")
    sp.add_argument("--height", type=int, help="target height in pixels")


def _add_tuning(sp: argparse.ArgumentParser, default_mode: str) -> None:
    sp.add_argument("--mode", choices=MODES, default=default_mode)
    sp.add_argument("--alpha", type=float, default=0.2, help="buffer threshold fraction")
    sp.add_argument("--motion-weight", type=float, default=0.6, help="weight of the frame difference term")
    sp.add_argument("--max-buffer", type=int, default=64, help="hard cap on buffer length")
    sp.add_argument("--metrics", metavar="PATH", help="write a key=value metrics report")
    sp.add_argument("--reaverage-energy", action="store_true",
                    help="recompute run energy from every carved frame, not the representative")
    sp.add_argument("--height-first", action="store_true", help="carve height before width")


def cli_main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _dispatch(args)
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"vidcarve: error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # argparse --help
        return 0 if exc.code in (None, 0) else int(exc.code)
    except (MediaFormatError, OSError) as exc:
        print(f"vidcarve: error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"vidcarve: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_main())


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "image":
        return _run_image(args)
    if args.command == "video":
        return _run_video(args)
    return _run_bench(args)


def _run_image(args) -> int:
    _check_sizing(args)
    frame = next(read_frames(args.input), None)
    if frame is None:
        raise MediaFormatError(f"no frames in {args.input}")
    config = _make_config(args, args.mode, source_width=frame.shape[1])
    out, metrics = retarget_image(frame, config)
    write_frames(args.output, [out])
    if args.metrics:
        _write_report(args.metrics, format_metrics(metrics))
    return 0


def _run_video(args) -> int:
    _check_sizing(args)
    frames = list(read_frames(args.input))
    if not frames:
        raise MediaFormatError(f"no frames in {args.input}")
    config = _make_config(args, args.mode, source_width=frames[0].shape[1])
    out, metrics = retarget_video(frames, config)
    if len(out) >= 2:
        metrics.jitter = jitter(out).value
    write_frames(args.output, out)
    if args.metrics:
        _write_report(args.metrics, format_metrics(metrics))
    return 0


def _run_bench(args) -> int:
    _check_sizing(args)
    if args.input in SYNTHETIC_KINDS:
        width, height = _parse_size(args.size)
        spec = SyntheticSpec(
            kind=args.input, width=width, height=height, frames=args.frames, seed=args.seed
        )
        frames = generate(spec)
    else:
        frames = list(read_frames(args.input))
        if not frames:
            raise MediaFormatError(f"no frames in {args.input}")
    modes = [m.strip() for m in args.modes.split(",") if m.strip()]
    unknown = [m for m in modes if m not in MODES]
    if unknown or not modes:
        raise _UsageError(f"--modes must name modes from {MODES}, got {args.modes!r}")
    variants = {
        mode: _make_config(args, mode, source_width=frames[0].shape[1]) for mode in modes
    }
    results = compare(frames, variants)
    report = format_metrics(results)
    print(report, end="")
    if args.metrics:
        _write_report(args.metrics, report)
    if args.figures:
        from .plots import render_report_figures

        paths = render_report_figures(results, args.figures, policy=_make_policy(args))
        for p in paths:
            print(f"figure: {p}")
    return 0


def _check_sizing(args) -> None:
    if args.width is not None and args.scale is not None:
        raise _UsageError("--width and --scale are mutually exclusive")
    if args.width is None and args.scale is None:
        raise _UsageError("one of --width or --scale is required")
    if args.scale is not None and not 0.0 < args.scale <= 1.0:
        raise _UsageError(f"--scale must be in (0, 1], got {args.scale}")


def _make_policy(args) -> BufferPolicy:
    if args.max_buffer < 1:
        raise _UsageError(f"--max-buffer must be >= 1, got {args.max_buffer}")
    if args.alpha <= 0:
        raise _UsageError(f"--alpha must be positive, got {args.alpha}")
    return BufferPolicy(alpha=args.alpha, max_len=args.max_buffer)


def _make_config(args, mode: str, source_width: int) -> RetargetConfig:
    if args.width is not None:
        target_width = args.width
    else:
        target_width = max(1, round(source_width * args.scale))
    if not 0.0 <= args.motion_weight <= 1.0:
        raise _UsageError(f"--motion-weight must be in [0, 1], got {args.motion_weight}")
    return RetargetConfig(
        target_width=target_width,
        target_height=args.height,
        mode=mode,
        policy=_make_policy(args),
        w_motion=args.motion_weight,
        w_grad=1.0 - args.motion_weight,
        reaverage_energy=args.reaverage_energy,
        height_first=args.height_first,
    )


def _write_report(path: str, text: str) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(text)


def _parse_size(text: str) -> tuple[int, int]:
    try:
        w, h = text.lower().split("x")
        return int(w), int(h)
    except ValueError:
        raise _UsageError(f"--size must look like 320x240, got {text!r}") from None


if __name__ == "__main__":
    main()
