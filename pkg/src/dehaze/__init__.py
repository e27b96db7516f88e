"""CPU dehazing for single images and raw video streams.

The pipeline estimates atmospheric light and a transmission map from the
dark channel of each frame, then inverts the haze model
I = J * t + A * (1 - t). Video mode trades the guided transmission
refinement for throughput; image mode keeps it.
"""

__version__ = "0.1.0"

from .estimation import (
    box_filter,
    channel_min,
    dark_channel,
    estimate_airlight,
    estimate_transmission,
    guided_filter,
)
from .imageops import float_to_u8, resize_bilinear, to_grayscale, u8_to_float
from .morphology import min_filter, min_filter_naive
from .pipeline import (
    DehazeParams,
    FrameTelemetry,
    StreamStats,
    dehaze_frame,
    dehaze_image,
    process_stream,
)
from .recover import gamma_correct, gray_world_balance, recover_radiance
from .synth import HazeSpec, compose_haze, psnr, ramp_transmission, transmission_rmse

__all__ = [
    "DehazeParams",
    "Dehazer",
    "FrameTelemetry",
    "HazeSpec",
    "StreamStats",
    "box_filter",
    "channel_min",
    "compose_haze",
    "dark_channel",
    "dehaze_frame",
    "dehaze_image",
    "estimate_airlight",
    "estimate_transmission",
    "float_to_u8",
    "gamma_correct",
    "gray_world_balance",
    "guided_filter",
    "min_filter",
    "min_filter_naive",
    "process_stream",
    "psnr",
    "ramp_transmission",
    "recover_radiance",
    "resize_bilinear",
    "to_grayscale",
    "transmission_rmse",
    "u8_to_float",
]


def __getattr__(name):
    # sklearn import is slow; defer it until someone asks for the estimator.
    if name == "Dehazer":
        from .estimator import Dehazer

        return Dehazer
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
