"""Scene radiance recovery and post-processing.

Inverting the haze model gives J = (I - A) / t + A. The post-processing
steps brighten the result (dehazing darkens the frame overall) and pull
the channel means together when a color cast remains.
"""

import numpy as np

from .validation import (
    check_airlight,
    check_float_image,
    check_same_shape,
    check_scalar_map,
)

DEFAULT_GAMMA = 1.2

# Channel means below this are considered degenerate; gray-world scaling
# would blow up, so the frame is returned unchanged instead.
_MEAN_FLOOR = 1e-6

# Per-channel gain limits for gray-world balancing.
_GAIN_LO = 0.5
_GAIN_HI = 2.0


def recover_radiance(image, airlight, transmission):
    """Invert the haze model: J = (I - A) / t + A, clamped to [0, 1].

    The transmission map must be strictly positive everywhere; the
    pipeline guarantees that by clamping at t_min before calling this.
    """
    image = check_float_image(image)
    airlight = check_airlight(airlight)
    t = check_scalar_map(transmission, name="transmission")
    check_same_shape(image, t, "image", "transmission")
    if t.min() <= 0.0:
        raise ValueError("transmission must be strictly positive everywhere")
    out = image - airlight
    out /= t[:, :, np.newaxis]
    out += airlight
    return np.clip(out, 0.0, 1.0, out=out)


def gamma_correct(image, gamma=DEFAULT_GAMMA):
    """Apply s -> s**(1/gamma) per sample; gamma > 1 brightens."""
    if not gamma > 0.0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    image = check_float_image(image)
    if gamma == 1.0:
        return image.copy()
    out = np.power(image, 1.0 / gamma)
    return np.clip(out, 0.0, 1.0, out=out)


def gray_world_balance(image):
    """Scale each channel toward the global mean (gray-world assumption).

    Channel c is multiplied by mean(all) / mean(c), with gains clamped to
    [0.5, 2.0] so one odd frame cannot swing colors wildly. If any channel
    mean is near zero the frame is returned unchanged.
    """
    image = check_float_image(image)
    means = image.mean(axis=(0, 1))
    if means.min() < _MEAN_FLOOR:
        return image.copy()
    gains = np.clip(means.mean() / means, _GAIN_LO, _GAIN_HI)
    return np.clip(image * gains, 0.0, 1.0)
