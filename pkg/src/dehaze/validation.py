"""Input validation helpers shared by the public entry points.

Every public function in this package funnels its array arguments through
one of these checkers, so shape and dtype errors surface immediately with
a message that names the offending argument instead of failing deep inside
a numpy broadcast.
"""

import numpy as np

# Slack tolerated on the [0, 1] range check before values are clipped.
# Accumulated float rounding can push a sample a few ulp past an endpoint;
# anything further out is treated as a caller bug.
_RANGE_SLACK = 1e-9


def check_u8_frame(frame, name="frame"):
    """Validate an interleaved 8-bit RGB frame of shape (H, W, 3).

    Returns the frame as a C-contiguous uint8 array.
    """
    arr = np.asarray(frame)
    if arr.dtype != np.uint8:
        raise ValueError(f"{name}: expected dtype uint8, got {arr.dtype}")
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"{name}: expected shape (H, W, 3), got {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name}: empty image {arr.shape[0]}x{arr.shape[1]}")
    return np.ascontiguousarray(arr)


def check_float_image(image, name="image", clip=False):
    """Validate a float RGB image of shape (H, W, 3) with samples in [0, 1].

    Returns the image as float64. Samples may exceed the range by at most
    a few ulp of rounding slack; they are clipped. Anything further out of
    range, or non-finite, raises ValueError. With clip=True the range
    check is skipped entirely and values are clamped instead, for entry
    points whose contract is to quantize whatever they are given.
    """
    arr = np.asarray(image, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"{name}: expected shape (H, W, 3), got {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name}: empty image {arr.shape[0]}x{arr.shape[1]}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name}: contains non-finite samples")
    lo = arr.min()
    hi = arr.max()
    if not clip and (lo < -_RANGE_SLACK or hi > 1.0 + _RANGE_SLACK):
        raise ValueError(
            f"{name}: samples outside [0, 1] (min {lo:.6g}, max {hi:.6g})"
        )
    if lo < 0.0 or hi > 1.0:
        arr = np.clip(arr, 0.0, 1.0)
    return arr


def check_scalar_map(m, name="map"):
    """Validate a 2-D float map (dark channel, transmission, depth, ...).

    Returns it as float64. Only finiteness is enforced here; range
    constraints differ per use and are checked by the callers.
    """
    arr = np.asarray(m, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name}: expected a 2-D map, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name}: empty map {arr.shape[0]}x{arr.shape[1]}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name}: contains non-finite samples")
    return arr


def check_airlight(airlight, name="airlight"):
    """Validate a per-channel atmospheric light vector of shape (3,).

    Every component must lie in (0, 1]; a zero component would divide
    the transmission estimate by zero.
    """
    arr = np.asarray(airlight, dtype=np.float64)
    if arr.shape != (3,):
        raise ValueError(f"{name}: expected shape (3,), got {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name}: contains non-finite components")
    if arr.min() <= 0.0 or arr.max() > 1.0:
        raise ValueError(f"{name}: components must lie in (0, 1], got {arr.tolist()}")
    return arr


def check_radius(radius, name="radius", minimum=0):
    """Validate an integer window radius."""
    r = int(radius)
    if r != radius:
        raise ValueError(f"{name}: expected an integer, got {radius!r}")
    if r < minimum:
        raise ValueError(f"{name}: must be >= {minimum}, got {r}")
    return r


def check_same_shape(a, b, name_a, name_b):
    """Require two arrays to share leading height/width dimensions."""
    if a.shape[:2] != b.shape[:2]:
        raise ValueError(
            f"{name_a} and {name_b} disagree on size: "
            f"{a.shape[:2]} vs {b.shape[:2]}"
        )
