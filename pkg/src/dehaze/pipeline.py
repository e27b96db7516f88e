"""Per-frame dehazing pipeline and stream orchestration.

A frame moves through a fixed stage order: resize, channel minimum,
patch erosion, airlight estimation, transmission, recovery,
post-processing, output quantization. Image mode inserts a guided-filter
refinement of the transmission map after estimation; video mode skips it
to stay within a real-time budget. Every stage is pure, so a stream of
frames can be processed by several workers and still produce output
bit-identical to the sequential order.
"""

import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field, replace

import numpy as np

from .estimation import (
    DEFAULT_ALPHA,
    DEFAULT_GUIDED_EPS,
    DEFAULT_GUIDED_RADIUS,
    DEFAULT_OMEGA,
    DEFAULT_PATCH_RADIUS,
    DEFAULT_T_MIN,
    DEFAULT_TOP_FRACTION,
    channel_min,
    estimate_airlight,
    guided_filter,
    transmission_from_channel_min,
)
from .imageops import float_to_u8, resize_bilinear, to_grayscale, u8_to_float
from .morphology import min_filter
from .recover import DEFAULT_GAMMA, gamma_correct, gray_world_balance, recover_radiance
from .validation import check_u8_frame

DEFAULT_STREAM_SIZE = (640, 480)

VIDEO_STAGES = (
    "resize",
    "channel_min",
    "min_filter",
    "airlight",
    "transmission",
    "recover",
    "postprocess",
    "output",
)
IMAGE_STAGES = VIDEO_STAGES[:5] + ("guided_filter",) + VIDEO_STAGES[5:]


@dataclass(frozen=True)
class DehazeParams:
    """Hyperparameters for the dehazing pipeline.

    mode selects the stage set: "video" (no transmission refinement,
    frames resized to resize_to) or "image" (guided-filter refinement,
    native resolution unless resize_to is set). white_balance=None means
    the mode default: off for video, on for image.
    """

    mode: str = "video"
    patch_radius: int = DEFAULT_PATCH_RADIUS
    top_fraction: float = DEFAULT_TOP_FRACTION
    alpha: float = DEFAULT_ALPHA
    omega: float = DEFAULT_OMEGA
    t_min: float = DEFAULT_T_MIN
    guided_radius: int = DEFAULT_GUIDED_RADIUS
    guided_eps: float = DEFAULT_GUIDED_EPS
    gamma: float = DEFAULT_GAMMA
    white_balance: bool = None
    resize_to: tuple = DEFAULT_STREAM_SIZE

    @classmethod
    def for_image(cls, **overrides):
        """Parameters for single-image work: refine t, keep native size."""
        overrides.setdefault("mode", "image")
        overrides.setdefault("resize_to", None)
        return cls(**overrides)

    def validate(self):
        if self.mode not in ("video", "image"):
            raise ValueError(f"mode must be 'video' or 'image', got {self.mode!r}")
        if int(self.patch_radius) != self.patch_radius or self.patch_radius < 1:
            raise ValueError(f"patch_radius must be an integer >= 1, got {self.patch_radius}")
        if not 0.0 < self.top_fraction <= 1.0:
            raise ValueError(f"top_fraction must lie in (0, 1], got {self.top_fraction}")
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not 0.0 < self.omega <= 1.0:
            raise ValueError(f"omega must lie in (0, 1], got {self.omega}")
        if not 0.0 < self.t_min < 1.0:
            raise ValueError(f"t_min must lie in (0, 1), got {self.t_min}")
        if int(self.guided_radius) != self.guided_radius or self.guided_radius < 1:
            raise ValueError(f"guided_radius must be an integer >= 1, got {self.guided_radius}")
        if not self.guided_eps > 0.0:
            raise ValueError(f"guided_eps must be positive, got {self.guided_eps}")
        if not self.gamma > 0.0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if self.white_balance not in (None, True, False):
            raise ValueError(f"white_balance must be None or bool, got {self.white_balance!r}")
        if self.resize_to is not None:
            try:
                w, h = self.resize_to
            except (TypeError, ValueError):
                raise ValueError(f"resize_to must be None or (width, height), got {self.resize_to!r}")
            if int(w) != w or int(h) != h or w < 1 or h < 1:
                raise ValueError(f"resize_to must hold positive integers, got {self.resize_to!r}")
        return self

    def balance_enabled(self):
        if self.white_balance is None:
            return self.mode == "image"
        return self.white_balance


class FrameTelemetry:
    """Per-stage wall time and call counts, plus the airlight trace.

    One instance may be shared across many frames; timings accumulate.
    With capture_maps=True the intermediate maps of the most recent frame
    (dark channel, coarse and final transmission) are kept for inspection.
    """

    def __init__(self, capture_maps=False):
        self.timings = {}
        self.counts = {}
        self.airlights = []
        self.capture_maps = capture_maps
        self.maps = {}

    @contextmanager
    def stage(self, name):
        start = time.perf_counter()
        try:
            yield
        finally:
            elapsed = time.perf_counter() - start
            self.timings.setdefault(name, []).append(elapsed)
            self.counts[name] = self.counts.get(name, 0) + 1

    def record_airlight(self, airlight):
        self.airlights.append(np.asarray(airlight, dtype=np.float64).copy())

    def record_map(self, name, m):
        if self.capture_maps:
            self.maps[name] = m.copy()

    def total_time(self, name):
        return sum(self.timings.get(name, ()))


@dataclass
class StreamStats:
    """Summary of one stream run."""

    frame_count: int
    wall_time: float
    fps: float
    airlight_trace: list = field(default_factory=list)


def dehaze_frame(frame, params=None, telemetry=None):
    """Dehaze one interleaved uint8 RGB frame; returns a uint8 frame.

    The stage order is fixed; params.mode decides whether the guided
    refinement runs. The function is pure: equal inputs give bit-equal
    outputs, and nothing is cached between calls.
    """
    if params is None:
        params = DehazeParams()
    params.validate()
    tel = telemetry if telemetry is not None else FrameTelemetry()

    with tel.stage("resize"):
        img = u8_to_float(frame)
        if params.resize_to is not None:
            w, h = params.resize_to
            if (w, h) != (img.shape[1], img.shape[0]):
                img = resize_bilinear(img, w, h)

    with tel.stage("channel_min"):
        cmin = channel_min(img)

    with tel.stage("min_filter"):
        dark = min_filter(cmin, params.patch_radius)
    tel.record_map("dark", dark)

    with tel.stage("airlight"):
        airlight = estimate_airlight(img, dark, params.top_fraction, params.alpha)
    tel.record_airlight(airlight)

    with tel.stage("transmission"):
        t = transmission_from_channel_min(cmin, airlight, params.omega, params.t_min)
    tel.record_map("transmission_coarse", t)

    if params.mode == "image":
        with tel.stage("guided_filter"):
            guide = to_grayscale(img)
            t = guided_filter(t, guide, params.guided_radius, params.guided_eps)
            # Refinement can smooth below the floor; restore it so the
            # recovery divide stays well-conditioned.
            t = np.maximum(t, params.t_min)
    tel.record_map("transmission", t)

    with tel.stage("recover"):
        out = recover_radiance(img, airlight, t)

    with tel.stage("postprocess"):
        out = gamma_correct(out, params.gamma)
        if params.balance_enabled():
            out = gray_world_balance(out)

    with tel.stage("output"):
        result = float_to_u8(out)
    return result


def dehaze_image(frame, params=None, telemetry=None):
    """Dehaze a single image at native resolution with refinement on.

    Any params given are coerced to image mode; resize_to is honored if
    set explicitly.
    """
    if params is None:
        params = DehazeParams.for_image()
    elif params.mode != "image":
        params = replace(params, mode="image")
    return dehaze_frame(frame, params, telemetry)


def process_stream(frames, params=None, sink=None, workers=1):
    """Run the pipeline over an iterable of uint8 frames, in order.

    Each output frame is passed to sink (if given) in input order before
    the run finishes. workers > 1 dehazes frames concurrently; the stage
    functions are pure, so results are bit-identical to workers=1. All
    frames must share the dimensions of the first; a mid-stream change
    aborts with an error naming the offending frame, after every frame
    already dehazed has been handed to the sink.

    Returns StreamStats with the frame count, wall time, achieved fps,
    and the per-frame airlight trace.
    """
    if params is None:
        params = DehazeParams()
    params.validate()
    workers = int(workers)
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")

    trace = []
    count = 0
    expected_shape = None
    start = time.perf_counter()

    def run_one(frame):
        tel = FrameTelemetry()
        out = dehaze_frame(frame, params, tel)
        return out, tel.airlights[0]

    def check_frame(frame, index):
        nonlocal expected_shape
        frame = check_u8_frame(frame, name=f"frame {index}")
        if expected_shape is None:
            expected_shape = frame.shape
        elif frame.shape != expected_shape:
            raise ValueError(
                f"frame {index} has size {frame.shape[1]}x{frame.shape[0]}, "
                f"expected {expected_shape[1]}x{expected_shape[0]}"
            )
        return frame

    def emit(result):
        nonlocal count
        out, airlight = result
        if sink is not None:
            sink(out)
        trace.append(airlight)
        count += 1

    if workers == 1:
        for index, frame in enumerate(frames):
            emit(run_one(check_frame(frame, index)))
    else:
        pending = []
        with ThreadPoolExecutor(max_workers=workers) as pool:
            try:
                for index, frame in enumerate(frames):
                    try:
                        frame = check_frame(frame, index)
                    except ValueError:
                        # Flush everything already in flight so completed
                        # frames reach the sink before the abort.
                        for fut in pending:
                            emit(fut.result())
                        pending.clear()
                        raise
                    pending.append(pool.submit(run_one, frame))
                    if len(pending) >= workers * 2:
                        emit(pending.pop(0).result())
            finally:
                for fut in pending:
                    emit(fut.result())

    wall = time.perf_counter() - start
    fps = count / wall if wall > 0 and count else 0.0
    return StreamStats(frame_count=count, wall_time=wall, fps=fps, airlight_trace=trace)
