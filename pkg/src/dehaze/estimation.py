"""Dark channel, atmospheric light, transmission, and guided refinement.

The haze model is I(x) = J(x) * t(x) + A * (1 - t(x)): an observed frame
I is the scene radiance J attenuated by transmission t and mixed with the
atmospheric light A. The estimators here recover A and t from a single
frame using the dark channel statistic.
"""

import math

import numpy as np

from .morphology import min_filter
from .validation import (
    check_airlight,
    check_float_image,
    check_radius,
    check_same_shape,
    check_scalar_map,
)

DEFAULT_PATCH_RADIUS = 7
DEFAULT_TOP_FRACTION = 0.001
DEFAULT_ALPHA = 0.8
DEFAULT_OMEGA = 0.5
DEFAULT_T_MIN = 0.05
DEFAULT_GUIDED_RADIUS = 40
DEFAULT_GUIDED_EPS = 1e-3

# Floor applied to estimated airlight components so later divisions by
# max(A) are safe even on an all-black frame.
AIRLIGHT_FLOOR = 1e-6


def channel_min(image):
    """Per-pixel minimum over the three color channels."""
    image = check_float_image(image)
    return np.minimum(np.minimum(image[:, :, 0], image[:, :, 1]), image[:, :, 2])


def dark_channel(image, radius=DEFAULT_PATCH_RADIUS):
    """Dark channel: channel minimum eroded over a square patch."""
    return min_filter(channel_min(image), check_radius(radius))


def estimate_airlight(
    image,
    dark,
    top_fraction=DEFAULT_TOP_FRACTION,
    alpha=DEFAULT_ALPHA,
):
    """Estimate atmospheric light from the brightest dark-channel pixels.

    Selects the K = max(1, floor(top_fraction * N)) pixels with the
    largest dark-channel value (ties broken by smaller flat index),
    averages the frame's RGB there, and scales the mean by alpha to damp
    the overshoot that picking extreme pixels introduces. Components are
    floored at a small positive value so the result is always usable as
    a divisor.

    Returns a float64 vector of shape (3,).
    """
    image = check_float_image(image)
    dark = check_scalar_map(dark, name="dark")
    check_same_shape(image, dark, "image", "dark")
    if not 0.0 < top_fraction <= 1.0:
        raise ValueError(f"top_fraction must lie in (0, 1], got {top_fraction}")
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")

    n = dark.size
    k = max(1, math.floor(top_fraction * n))
    flat = dark.ravel()
    if k >= n:
        selected = np.arange(n)
    else:
        # Everything strictly above the K-th largest value is in, then the
        # tie value itself fills the remaining slots in index order.
        threshold = np.partition(flat, n - k)[n - k]
        above = np.flatnonzero(flat > threshold)
        ties = np.flatnonzero(flat == threshold)[: k - above.size]
        selected = np.concatenate([above, ties])
    mean_rgb = image.reshape(-1, 3)[selected].mean(axis=0)
    return np.maximum(alpha * mean_rgb, AIRLIGHT_FLOOR)


def transmission_from_channel_min(cmin, airlight, omega=DEFAULT_OMEGA, t_min=DEFAULT_T_MIN):
    """Transmission map from a precomputed per-pixel channel minimum.

    t(x) = clamp(1 - omega * cmin(x) / max(A), t_min, 1). Normalizing by
    the largest airlight component keeps the ratio in [0, 1], and omega < 1
    leaves a little haze so distant regions do not flatten out.
    """
    cmin = check_scalar_map(cmin, name="cmin")
    airlight = check_airlight(airlight)
    if not 0.0 < omega <= 1.0:
        raise ValueError(f"omega must lie in (0, 1], got {omega}")
    if not 0.0 < t_min < 1.0:
        raise ValueError(f"t_min must lie in (0, 1), got {t_min}")
    t = 1.0 - omega * (cmin / airlight.max())
    return np.clip(t, t_min, 1.0)


def estimate_transmission(image, airlight, omega=DEFAULT_OMEGA, t_min=DEFAULT_T_MIN):
    """Transmission map for a frame given its atmospheric light."""
    image = check_float_image(image)
    return transmission_from_channel_min(channel_min(image), airlight, omega, t_min)


def box_filter(m, radius):
    """Mean over a (2*radius+1) square window, replicate border.

    Implemented with a summed-area table, so the cost per pixel does not
    depend on the radius.
    """
    m = check_scalar_map(m)
    radius = check_radius(radius)
    if radius == 0:
        return m.copy()
    k = 2 * radius + 1
    padded = np.pad(m, radius, mode="edge")
    sat = np.zeros((padded.shape[0] + 1, padded.shape[1] + 1), dtype=np.float64)
    sat[1:, 1:] = padded.cumsum(axis=0).cumsum(axis=1)
    window = sat[k:, k:] - sat[:-k, k:] - sat[k:, :-k] + sat[:-k, :-k]
    return window / float(k * k)


def box_filter_naive(m, radius):
    """Per-pixel window mean. Correctness reference for box_filter."""
    m = check_scalar_map(m)
    radius = check_radius(radius)
    if radius == 0:
        return m.copy()
    h, w = m.shape
    padded = np.pad(m, radius, mode="edge")
    out = np.empty_like(m)
    k = 2 * radius + 1
    for i in range(h):
        for j in range(w):
            out[i, j] = padded[i : i + k, j : j + k].mean()
    return out


def guided_filter(p, guide, radius=DEFAULT_GUIDED_RADIUS, eps=DEFAULT_GUIDED_EPS):
    """Edge-preserving smoothing of map p steered by a grayscale guide.

    Fits q = a * guide + b per window by least squares with an eps
    regularizer on the guide variance, averages the coefficients over
    overlapping windows, and clamps the output to [0, 1]. Flat guide
    regions are smoothed toward the window mean; strong guide edges are
    preserved in q.
    """
    p = check_scalar_map(p, name="p")
    guide = check_scalar_map(guide, name="guide")
    check_same_shape(p, guide, "p", "guide")
    radius = check_radius(radius, minimum=1)
    if not eps > 0.0:
        raise ValueError(f"eps must be positive, got {eps}")

    mean_i = box_filter(guide, radius)
    mean_p = box_filter(p, radius)
    corr_ip = box_filter(guide * p, radius)
    corr_ii = box_filter(guide * guide, radius)

    var_i = corr_ii - mean_i * mean_i
    cov_ip = corr_ip - mean_i * mean_p

    a = cov_ip / (var_i + eps)
    b = mean_p - a * mean_i

    q = box_filter(a, radius) * guide + box_filter(b, radius)
    return np.clip(q, 0.0, 1.0)
