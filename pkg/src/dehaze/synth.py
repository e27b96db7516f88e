"""Synthetic haze composition and quality metrics.

The forward model I = J * t + A * (1 - t) composes a hazy frame from a
clean one under a known airlight and transmission, so recovery quality
can be scored against ground truth instead of eyeballed.
"""

from dataclasses import dataclass

import numpy as np

from .validation import (
    check_airlight,
    check_float_image,
    check_same_shape,
    check_scalar_map,
)


@dataclass(frozen=True)
class HazeSpec:
    """Ground truth for one synthetic hazy frame.

    transmission is either a scalar applied everywhere or a 2-D map
    matching the clean image; values must lie in (0, 1].
    """

    airlight: object
    transmission: object

    def resolve(self, height, width):
        """Return (airlight vector, transmission map) for an HxW frame."""
        a = check_airlight(self.airlight)
        t = self.transmission
        if np.isscalar(t):
            if not 0.0 < t <= 1.0:
                raise ValueError(f"transmission must lie in (0, 1], got {t}")
            t_map = np.full((height, width), float(t))
        else:
            t_map = check_scalar_map(t, name="transmission")
            if t_map.shape != (height, width):
                raise ValueError(
                    f"transmission map shape {t_map.shape} does not match "
                    f"image {height}x{width}"
                )
            if t_map.min() <= 0.0 or t_map.max() > 1.0:
                raise ValueError("transmission map values must lie in (0, 1]")
        return a, t_map


def compose_haze(clean, spec):
    """Apply the forward haze model to a clean image."""
    clean = check_float_image(clean, name="clean")
    a, t = spec.resolve(clean.shape[0], clean.shape[1])
    t3 = t[:, :, np.newaxis]
    hazy = clean * t3 + a * (1.0 - t3)
    return np.clip(hazy, 0.0, 1.0)


def ramp_transmission(height, width, lo=0.3, hi=1.0, axis="x"):
    """Linear transmission ramp from lo to hi along the given axis."""
    if not (0.0 < lo <= 1.0 and 0.0 < hi <= 1.0):
        raise ValueError(f"ramp endpoints must lie in (0, 1], got {lo}, {hi}")
    if axis not in ("x", "y"):
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    if axis == "x":
        line = np.linspace(lo, hi, width)
        return np.broadcast_to(line, (height, width)).copy()
    line = np.linspace(lo, hi, height)
    return np.broadcast_to(line[:, np.newaxis], (height, width)).copy()


def depth_transmission(depth, beta):
    """Transmission from a depth map: t = exp(-beta * depth)."""
    depth = check_scalar_map(depth, name="depth")
    if depth.min() < 0.0:
        raise ValueError("depth values must be non-negative")
    if not beta > 0.0:
        raise ValueError(f"beta must be positive, got {beta}")
    return np.exp(-beta * depth)


def psnr(a, b):
    """Peak signal-to-noise ratio between two float images, in dB.

    Both inputs must share a shape. Identical images score infinity; a
    uniform difference of 0.1 scores exactly 20 dB.
    """
    a = check_float_image(a, name="a")
    b = check_float_image(b, name="b")
    if a.shape != b.shape:
        raise ValueError(f"image shapes disagree: {a.shape} vs {b.shape}")
    mse = np.mean((a - b) ** 2)
    if mse == 0.0:
        return float("inf")
    return float(-10.0 * np.log10(mse))


def transmission_rmse(estimate, truth, border=0):
    """Root-mean-square transmission error, optionally ignoring a border.

    Patch-based estimates are least trustworthy near the frame edge, so
    border > 0 crops that many pixels from every side before scoring.
    """
    estimate = check_scalar_map(estimate, name="estimate")
    truth = check_scalar_map(truth, name="truth")
    check_same_shape(estimate, truth, "estimate", "truth")
    border = int(border)
    if border < 0:
        raise ValueError(f"border must be >= 0, got {border}")
    h, w = estimate.shape
    if 2 * border >= h or 2 * border >= w:
        raise ValueError(f"border {border} leaves no interior in a {h}x{w} map")
    if border:
        estimate = estimate[border:-border, border:-border]
        truth = truth[border:-border, border:-border]
    return float(np.sqrt(np.mean((estimate - truth) ** 2)))
