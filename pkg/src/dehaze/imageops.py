"""Pixel format conversion, grayscale reduction, and bilinear resizing.

All float images in this package are (H, W, 3) float64 arrays with samples
in [0, 1]; 8-bit frames are (H, W, 3) uint8. The conversions here define
the package-wide quantization convention: uint8 -> float divides by 255,
float -> uint8 clamps and rounds half away from zero, so the round trip
through float is the identity on every byte value.
"""

import numpy as np

from .validation import check_float_image, check_u8_frame

# Rec.601 luma weights used for the grayscale guide image.
GRAY_WEIGHTS = (0.299, 0.587, 0.114)


def u8_to_float(frame):
    """Convert an interleaved uint8 RGB frame to float64 in [0, 1]."""
    frame = check_u8_frame(frame)
    return frame.astype(np.float64) / 255.0


def float_to_u8(image):
    """Quantize a float RGB image to uint8.

    Samples are clamped to [0, 1], scaled by 255, and rounded half away
    from zero, which for non-negative values is floor(x + 0.5). Out of
    range input is legal here; clamping it is the point.
    """
    image = check_float_image(image, clip=True)
    out = np.clip(image, 0.0, 1.0)
    out *= 255.0
    out += 0.5
    np.floor(out, out=out)
    return out.astype(np.uint8)


def to_grayscale(image):
    """Reduce an RGB image to a single luma channel (Rec.601 weights)."""
    image = check_float_image(image)
    wr, wg, wb = GRAY_WEIGHTS
    gray = wr * image[:, :, 0] + wg * image[:, :, 1] + wb * image[:, :, 2]
    return np.clip(gray, 0.0, 1.0)


def resize_bilinear(image, width, height):
    """Resize an RGB image with bilinear interpolation.

    Source coordinates use pixel-center alignment: destination pixel i
    samples the source at (i + 0.5) * scale - 0.5, clamped to the valid
    range, so corner pixels replicate rather than extrapolate. Output
    samples are convex combinations of input samples and stay in [0, 1].
    """
    image = check_float_image(image)
    width = int(width)
    height = int(height)
    if width < 1 or height < 1:
        raise ValueError(f"target size must be positive, got {width}x{height}")
    h, w = image.shape[:2]
    if (width, height) == (w, h):
        return image.copy()

    sx = (np.arange(width, dtype=np.float64) + 0.5) * (w / width) - 0.5
    sy = (np.arange(height, dtype=np.float64) + 0.5) * (h / height) - 0.5
    np.clip(sx, 0.0, w - 1.0, out=sx)
    np.clip(sy, 0.0, h - 1.0, out=sy)

    x0 = np.floor(sx).astype(np.intp)
    y0 = np.floor(sy).astype(np.intp)
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    fx = (sx - x0)[np.newaxis, :, np.newaxis]
    fy = (sy - y0)[:, np.newaxis, np.newaxis]

    rows = image[y0] * (1.0 - fy) + image[y1] * fy
    out = rows[:, x0] * (1.0 - fx) + rows[:, x1] * fx
    return np.clip(out, 0.0, 1.0)
