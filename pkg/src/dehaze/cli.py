"""Command line interface.

Subcommands:
  image  dehaze a single PPM/PNG image (guided refinement on)
  video  dehaze a raw RGB24 stream or a directory of frames
  synth  compose a synthetic hazy image with known ground truth
  bench  measure video-mode throughput on synthetic frames

'-' means stdin/stdout for image payloads and raw streams. Diagnostics
go to stderr for image/video so piped payloads stay clean; bench writes
its report to stdout.
"""

import argparse
import json
import re
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .benchmark import run_benchmark
from .frameio import (
    CodecError,
    StreamHeader,
    decode_image_bytes,
    iter_image_dir,
    read_raw_frames,
    write_image,
    write_png_bytes,
    write_ppm_bytes,
    write_raw_frame,
)
from .imageops import float_to_u8, to_grayscale, u8_to_float
from .pipeline import DehazeParams, FrameTelemetry, dehaze_image, process_stream
from .synth import HazeSpec, compose_haze, ramp_transmission


def _parse_size(text):
    """Parse 'WxH' into (width, height); 'none' means native size."""
    if text is None:
        return None
    lowered = text.strip().lower()
    if lowered in ("none", "native"):
        return None
    match = re.fullmatch(r"(\d+)x(\d+)", lowered)
    if not match:
        raise argparse.ArgumentTypeError(f"expected WxH or 'none', got {text!r}")
    width, height = int(match.group(1)), int(match.group(2))
    if width < 1 or height < 1:
        raise argparse.ArgumentTypeError(f"size must be positive, got {text!r}")
    return (width, height)


def _parse_patch(text):
    value = int(text)
    if value < 3 or value % 2 == 0:
        raise argparse.ArgumentTypeError(
            f"patch window must be an odd integer >= 3, got {value}"
        )
    return value


def _parse_airlight(text):
    parts = text.split(",")
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad airlight {text!r}")
    if len(values) == 1:
        values = values * 3
    if len(values) != 3:
        raise argparse.ArgumentTypeError("airlight needs 1 or 3 components")
    if min(values) <= 0.0 or max(values) > 1.0:
        raise argparse.ArgumentTypeError("airlight components must lie in (0, 1]")
    return tuple(values)


def _add_pipeline_args(parser):
    group = parser.add_argument_group("pipeline parameters")
    group.add_argument("--omega", type=float, default=0.5,
                       help="haze retention strength in (0, 1]")
    group.add_argument("--t-min", type=float, default=0.05, dest="t_min",
                       help="transmission floor in (0, 1)")
    group.add_argument("--alpha", type=float, default=0.8,
                       help="airlight damping factor in (0, 1]")
    group.add_argument("--top-fraction", type=float, default=0.001, dest="top_fraction",
                       help="fraction of brightest dark-channel pixels for airlight")
    group.add_argument("--patch", type=_parse_patch, default=15,
                       help="dark-channel erosion window (odd, >= 3)")
    group.add_argument("--gamma", type=float, default=1.2,
                       help="brightening exponent; s -> s**(1/gamma)")
    return group


def _params_from_args(args, mode):
    return DehazeParams(
        mode=mode,
        patch_radius=(args.patch - 1) // 2,
        top_fraction=args.top_fraction,
        alpha=args.alpha,
        omega=args.omega,
        t_min=args.t_min,
        guided_radius=getattr(args, "guided_radius", 40),
        guided_eps=getattr(args, "guided_eps", 1e-3),
        gamma=args.gamma,
        white_balance=args.balance if hasattr(args, "balance") else None,
        resize_to=getattr(args, "resize", None),
    ).validate()


def _read_image_arg(path):
    if path == "-":
        return decode_image_bytes(sys.stdin.buffer.read(), name="stdin")
    data = Path(path).read_bytes()
    return decode_image_bytes(data, name=path)


def _write_image_arg(path, frame):
    if path == "-":
        sys.stdout.buffer.write(write_ppm_bytes(frame))
        sys.stdout.buffer.flush()
    else:
        write_image(path, frame)


def _fail(stage, exc):
    print(f"error ({stage}): {exc}", file=sys.stderr)
    return 1


def cmd_image(args):
    stage = "setup"
    try:
        params = _params_from_args(args, mode="image")
        stage = "decode"
        frame = _read_image_arg(args.input)
        stage = "dehaze"
        telemetry = FrameTelemetry(capture_maps=True)
        start = time.perf_counter()
        out = dehaze_image(frame, params, telemetry)
        wall = time.perf_counter() - start
        stage = "encode"
        _write_image_arg(args.output, out)
    except (CodecError, OSError, ValueError) as exc:
        return _fail(stage, exc)

    airlight = telemetry.airlights[0]
    mean_t = float(telemetry.maps["transmission"].mean())
    print(
        f"{frame.shape[1]}x{frame.shape[0]} -> {out.shape[1]}x{out.shape[0]}  "
        f"airlight=[{airlight[0]:.3f}, {airlight[1]:.3f}, {airlight[2]:.3f}]  "
        f"mean_t={mean_t:.3f}  wall={wall * 1000.0:.1f}ms",
        file=sys.stderr,
    )
    return 0


def _open_video_frames(args):
    """Return (frame iterator, cleanup callable)."""
    path = args.input
    if path != "-" and Path(path).is_dir():
        return iter_image_dir(path, args.pattern), lambda: None
    if args.width is None or args.height is None:
        raise CodecError("raw stream input requires --width and --height")
    header = StreamHeader(width=args.width, height=args.height)
    if path == "-":
        return read_raw_frames(sys.stdin.buffer, header), lambda: None
    handle = open(path, "rb")
    return read_raw_frames(handle, header), handle.close


def cmd_video(args):
    stage = "setup"
    out_handle = None
    close_input = lambda: None
    try:
        params = _params_from_args(args, mode="video")
        stage = "open input"
        frames, close_input = _open_video_frames(args)
        stage = "open output"
        if args.output == "-":
            out_handle = sys.stdout.buffer
            closes_output = False
        else:
            out_handle = open(args.output, "wb")
            closes_output = True
        stage = "stream"
        stats = process_stream(
            frames,
            params,
            sink=lambda frame: write_raw_frame(out_handle, frame),
            workers=args.workers,
        )
    except (CodecError, OSError, ValueError) as exc:
        if out_handle is not None:
            out_handle.flush()
            if out_handle is not sys.stdout.buffer:
                out_handle.close()
        close_input()
        return _fail(stage, exc)
    out_handle.flush()
    if closes_output:
        out_handle.close()
    close_input()

    if args.report == "jsonl":
        for index, airlight in enumerate(stats.airlight_trace):
            record = {
                "type": "frame",
                "index": index,
                "airlight": [round(float(c), 6) for c in airlight],
            }
            print(json.dumps(record), file=sys.stderr)
        summary = {
            "type": "summary",
            "frames": stats.frame_count,
            "wall_time_s": round(stats.wall_time, 6),
            "fps": round(stats.fps, 3),
        }
        print(json.dumps(summary), file=sys.stderr)
    else:
        print(
            f"frames={stats.frame_count}  wall={stats.wall_time:.3f}s  "
            f"fps={stats.fps:.2f}",
            file=sys.stderr,
        )
    return 0


def cmd_synth(args):
    stage = "setup"
    try:
        chosen = [x is not None for x in (args.t, args.t_ramp, args.depth)]
        if sum(chosen) != 1:
            raise ValueError("pass exactly one of --t, --t-ramp, --depth")
        stage = "decode"
        clean_u8 = _read_image_arg(args.input)
        clean = u8_to_float(clean_u8)
        h, w = clean.shape[:2]
        stage = "compose"
        if args.t is not None:
            transmission = args.t
        elif args.t_ramp is not None:
            lo, hi = args.t_ramp
            transmission = ramp_transmission(h, w, lo, hi, axis="x")
        else:
            depth_u8 = _read_image_arg(args.depth)
            depth = to_grayscale(u8_to_float(depth_u8))
            if depth.shape != (h, w):
                raise ValueError(
                    f"depth map {depth.shape[1]}x{depth.shape[0]} does not "
                    f"match input {w}x{h}"
                )
            if not args.beta > 0.0:
                raise ValueError(f"--beta must be positive, got {args.beta}")
            transmission = np.maximum(np.exp(-args.beta * depth), 1e-6)
        spec = HazeSpec(airlight=args.airlight, transmission=transmission)
        hazy = compose_haze(clean, spec)
        stage = "encode"
        _write_image_arg(args.output, float_to_u8(hazy))
        if args.t_out is not None:
            _, t_map = spec.resolve(h, w)
            t_u8 = np.floor(np.clip(t_map, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)
            if not args.t_out.lower().endswith(".png"):
                raise ValueError("--t-out must be a .png path")
            Path(args.t_out).write_bytes(write_png_bytes(t_u8))
    except (CodecError, OSError, ValueError) as exc:
        return _fail(stage, exc)
    return 0


def cmd_bench(args):
    stage = "setup"
    try:
        params = DehazeParams(
            mode="video",
            patch_radius=(args.patch - 1) // 2,
            top_fraction=args.top_fraction,
            alpha=args.alpha,
            omega=args.omega,
            t_min=args.t_min,
            gamma=args.gamma,
            resize_to=(args.width, args.height),
        ).validate()
        stage = "bench"
        result = run_benchmark(
            params=params,
            frames=args.frames,
            width=args.width,
            height=args.height,
            seed=args.seed,
        )
    except ValueError as exc:
        return _fail(stage, exc)

    if args.report == "jsonl":
        summary = {
            "type": "bench",
            "frames": result.frame_count,
            "size": f"{result.width}x{result.height}",
            "wall_time_s": round(result.wall_time, 6),
            "fps": round(result.fps, 3),
        }
        print(json.dumps(summary))
        for name, stat in result.stage_stats.items():
            record = {
                "type": "stage",
                "name": name,
                "calls": stat.calls,
                "mean_ms": round(stat.mean_ms, 4),
                "p95_ms": round(stat.p95_ms, 4),
                "total_ms": round(stat.total_ms, 3),
            }
            print(json.dumps(record))
    else:
        print(
            f"bench: {result.frame_count} frames at {result.width}x{result.height}  "
            f"wall={result.wall_time:.3f}s  fps={result.fps:.2f}"
        )
        print(f"{'stage':<14} {'calls':>6} {'mean ms':>9} {'p95 ms':>9} {'total ms':>10}")
        for name, stat in result.stage_stats.items():
            print(
                f"{name:<14} {stat.calls:>6} {stat.mean_ms:>9.3f} "
                f"{stat.p95_ms:>9.3f} {stat.total_ms:>10.1f}"
            )
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dehaze",
        description="Single-image and real-time video dehazing on the CPU.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    fmt = argparse.ArgumentDefaultsHelpFormatter

    p_image = sub.add_parser(
        "image",
        help="dehaze one image (PPM or PNG)",
        description="Dehaze a single image with guided transmission refinement.",
        formatter_class=fmt,
    )
    p_image.add_argument("input", help="input image path, or '-' for stdin")
    p_image.add_argument("output", help="output image path, or '-' for PPM on stdout")
    _add_pipeline_args(p_image)
    p_image.add_argument("--balance", action=argparse.BooleanOptionalAction,
                         default=True, help="apply gray-world white balance")
    p_image.add_argument("--guided-radius", type=int, default=40, dest="guided_radius",
                         help="guided filter window radius")
    p_image.add_argument("--guided-eps", type=float, default=1e-3, dest="guided_eps",
                         help="guided filter regularizer")
    p_image.add_argument("--resize", type=_parse_size, default="none",
                         help="working size WxH, or 'none' for native")
    p_image.set_defaults(func=cmd_image)

    p_video = sub.add_parser(
        "video",
        help="dehaze a raw RGB24 stream or frame directory",
        description="Dehaze a stream of frames in video mode (no refinement).",
        formatter_class=fmt,
    )
    p_video.add_argument("input",
                         help="raw RGB24 file, '-' for stdin, or a frame directory")
    p_video.add_argument("output", help="raw RGB24 output path, or '-' for stdout")
    _add_pipeline_args(p_video)
    p_video.add_argument("--balance", action=argparse.BooleanOptionalAction,
                         default=False, help="apply gray-world white balance")
    p_video.add_argument("--resize", type=_parse_size, default="640x480",
                         help="working size WxH, or 'none' for native")
    p_video.add_argument("--width", type=int, default=None,
                         help="input frame width (raw streams)")
    p_video.add_argument("--height", type=int, default=None,
                         help="input frame height (raw streams)")
    p_video.add_argument("--pattern", default="*",
                         help="filename pattern for directory input")
    p_video.add_argument("--workers", type=int, default=1,
                         help="parallel dehazing workers")
    p_video.add_argument("--report", choices=("text", "jsonl"), default="text",
                         help="stats format, written to stderr")
    p_video.set_defaults(func=cmd_video)

    p_synth = sub.add_parser(
        "synth",
        help="compose a synthetic hazy image",
        description="Apply the forward haze model to a clean image. "
                    "Pass exactly one of --t, --t-ramp, --depth.",
        formatter_class=fmt,
    )
    p_synth.add_argument("input", help="clean image path, or '-' for stdin")
    p_synth.add_argument("output", help="hazy image path, or '-' for PPM on stdout")
    p_synth.add_argument("--airlight", type=_parse_airlight, default="0.8",
                         help="airlight as one value or 'r,g,b'")
    p_synth.add_argument("--t", type=float, default=None,
                         help="constant transmission in (0, 1]")
    p_synth.add_argument("--t-ramp", type=float, nargs=2, default=None,
                         metavar=("LO", "HI"), dest="t_ramp",
                         help="horizontal transmission ramp endpoints")
    p_synth.add_argument("--depth", default=None,
                         help="depth image; t = exp(-beta * luma)")
    p_synth.add_argument("--beta", type=float, default=1.0,
                         help="scattering coefficient for --depth")
    p_synth.add_argument("--t-out", default=None, dest="t_out",
                         help="also write the true transmission as a grayscale PNG")
    p_synth.set_defaults(func=cmd_synth)

    p_bench = sub.add_parser(
        "bench",
        help="measure video-mode throughput",
        description="Dehaze seeded synthetic frames and report per-stage timing.",
        formatter_class=fmt,
    )
    _add_pipeline_args(p_bench)
    p_bench.add_argument("--frames", type=int, default=300,
                         help="number of synthetic frames")
    p_bench.add_argument("--width", type=int, default=640, help="frame width")
    p_bench.add_argument("--height", type=int, default=480, help="frame height")
    p_bench.add_argument("--seed", type=int, default=0,
                         help="RNG seed for frame generation")
    p_bench.add_argument("--report", choices=("text", "jsonl"), default="text",
                         help="report format, written to stdout")
    p_bench.set_defaults(func=cmd_bench)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
