"""Frame and image I/O: PPM, PNG, raw RGB24 streams, image sequences.

All decoders return interleaved (H, W, 3) uint8 arrays; all encoders
take them. Codec failures raise a CodecError subclass specific to the
format so callers can report what actually went wrong instead of a
generic parse failure.
"""

import io
import struct
from dataclasses import dataclass
from fnmatch import fnmatch
from pathlib import Path

import numpy as np
from PIL import Image

from .validation import check_u8_frame

_WHITESPACE = b" \t\r\n\v\f"

PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"


class CodecError(ValueError):
    """Base for every decode/encode failure in this module."""


class PpmError(CodecError):
    pass


class PngError(CodecError):
    pass


class RawStreamError(CodecError):
    pass


class RawStreamTruncated(RawStreamError):
    """Raw stream ended inside a frame. offset is where the frame began."""

    def __init__(self, message, offset):
        super().__init__(message)
        self.offset = offset


class SequenceError(CodecError):
    pass


# --- PPM (binary P6) -------------------------------------------------------

def _ppm_token(data, pos):
    """Next header token at or after pos, skipping whitespace and comments."""
    n = len(data)
    while pos < n:
        c = data[pos]
        if c in _WHITESPACE:
            pos += 1
        elif c == 0x23:  # '#'
            end = data.find(b"\n", pos)
            if end < 0:
                raise PpmError("unterminated comment in PPM header")
            pos = end + 1
        else:
            break
    start = pos
    while pos < n and data[pos] not in _WHITESPACE and data[pos] != 0x23:
        pos += 1
    if start == pos:
        raise PpmError("truncated PPM header")
    return data[start:pos], pos


def read_ppm_bytes(data):
    """Decode a binary PPM (P6). Tolerates comments and loose whitespace."""
    if data[:2] != b"P6":
        raise PpmError(f"not a P6 PPM (magic {data[:2]!r})")
    pos = 2
    fields = []
    for name in ("width", "height", "maxval"):
        token, pos = _ppm_token(data, pos)
        try:
            value = int(token)
        except ValueError:
            raise PpmError(f"PPM {name} is not a number: {token!r}")
        fields.append(value)
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise PpmError(f"invalid PPM dimensions {width}x{height}")
    if maxval != 255:
        raise PpmError(f"unsupported PPM maxval {maxval} (only 255)")
    if pos >= len(data) or data[pos] not in _WHITESPACE:
        raise PpmError("PPM header not terminated by whitespace")
    pos += 1
    need = 3 * width * height
    pixels = data[pos : pos + need]
    if len(pixels) < need:
        raise PpmError(
            f"truncated PPM pixel data: got {len(pixels)} bytes, need {need}"
        )
    frame = np.frombuffer(pixels, dtype=np.uint8).reshape(height, width, 3)
    return frame.copy()


def write_ppm_bytes(frame):
    """Encode a frame as binary PPM with the canonical header."""
    frame = check_u8_frame(frame)
    h, w = frame.shape[:2]
    return b"P6\n%d %d\n255\n" % (w, h) + frame.tobytes()


# --- PNG (via Pillow, with an explicit IHDR gate) --------------------------

def _png_ihdr(data):
    """Return (bit_depth, color_type) from the IHDR chunk."""
    if data[:8] != PNG_SIGNATURE:
        raise PngError("not a PNG (bad signature)")
    if len(data) < 26 or data[12:16] != b"IHDR":
        raise PngError("corrupt PNG: missing IHDR chunk")
    (length,) = struct.unpack(">I", data[8:12])
    if length != 13:
        raise PngError(f"corrupt PNG: IHDR length {length}")
    return data[24], data[25]


def read_png_bytes(data):
    """Decode an 8-bit PNG to an RGB frame.

    Grayscale expands to three equal channels, alpha is dropped. 16-bit
    and palette images are rejected with errors naming the reason, not
    silently converted.
    """
    bit_depth, color_type = _png_ihdr(data)
    if bit_depth != 8:
        raise PngError(f"unsupported PNG bit depth {bit_depth} (only 8-bit)")
    if color_type == 3:
        raise PngError("unsupported PNG color type: palette")
    if color_type not in (0, 2, 4, 6):
        raise PngError(f"unsupported PNG color type {color_type}")
    try:
        img = Image.open(io.BytesIO(data))
        img.load()
    except Exception as exc:
        raise PngError(f"corrupt PNG: {exc}") from exc
    arr = np.asarray(img)
    if img.mode == "RGB":
        out = arr
    elif img.mode == "RGBA":
        out = arr[:, :, :3]
    elif img.mode == "L":
        out = np.repeat(arr[:, :, np.newaxis], 3, axis=2)
    elif img.mode == "LA":
        out = np.repeat(arr[:, :, :1], 3, axis=2)
    else:
        out = np.asarray(img.convert("RGB"))
    return np.ascontiguousarray(out)


def write_png_bytes(frame):
    """Encode a frame as 8-bit PNG. 2-D input is written as grayscale."""
    arr = np.asarray(frame)
    if arr.dtype != np.uint8:
        raise PngError(f"PNG writer expects uint8, got {arr.dtype}")
    if arr.ndim == 2:
        img = Image.fromarray(arr, mode="L")
    elif arr.ndim == 3 and arr.shape[2] == 3:
        img = Image.fromarray(np.ascontiguousarray(arr), mode="RGB")
    else:
        raise PngError(f"PNG writer expects (H, W, 3) or (H, W), got {arr.shape}")
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()


# --- path-based image helpers ----------------------------------------------

def decode_image_bytes(data, name="input"):
    """Decode image bytes by sniffing the magic: PPM or PNG."""
    if data[:8] == PNG_SIGNATURE:
        return read_png_bytes(data)
    if data[:2] == b"P6":
        return read_ppm_bytes(data)
    raise CodecError(f"{name}: unrecognized image format (not PPM or PNG)")


def read_image(path):
    """Read a .ppm or .png file into an RGB frame."""
    path = Path(path)
    suffix = path.suffix.lower()
    data = path.read_bytes()
    if suffix == ".ppm":
        return read_ppm_bytes(data)
    if suffix == ".png":
        return read_png_bytes(data)
    raise CodecError(f"{path.name}: unsupported image extension {suffix!r}")


def write_image(path, frame):
    """Write a frame to a .ppm or .png file chosen by extension."""
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".ppm":
        path.write_bytes(write_ppm_bytes(frame))
    elif suffix == ".png":
        path.write_bytes(write_png_bytes(frame))
    else:
        raise CodecError(f"{path.name}: unsupported image extension {suffix!r}")


# --- raw RGB24 frame streams ------------------------------------------------

@dataclass(frozen=True)
class StreamHeader:
    """Out-of-band description of a raw RGB24 stream.

    The byte stream itself is headerless: frames are width*height*3 bytes
    of interleaved RGB, back to back. frame_count=None means read until
    the stream ends.
    """

    width: int
    height: int
    frame_count: int = None

    def __post_init__(self):
        if int(self.width) != self.width or self.width < 1:
            raise RawStreamError(f"invalid stream width {self.width}")
        if int(self.height) != self.height or self.height < 1:
            raise RawStreamError(f"invalid stream height {self.height}")
        if self.frame_count is not None and (
            int(self.frame_count) != self.frame_count or self.frame_count < 0
        ):
            raise RawStreamError(f"invalid frame count {self.frame_count}")

    @property
    def frame_bytes(self):
        return 3 * self.width * self.height


def _read_exact(stream, n):
    """Read exactly n bytes unless the stream ends first."""
    chunks = []
    got = 0
    while got < n:
        chunk = stream.read(n - got)
        if not chunk:
            break
        chunks.append(chunk)
        got += len(chunk)
    return b"".join(chunks)


def read_raw_frames(stream, header):
    """Yield uint8 frames from a binary stream of raw RGB24 data.

    Raises RawStreamTruncated if the stream ends partway through a frame;
    the error message and .offset give the byte offset where the broken
    frame began.
    """
    size = header.frame_bytes
    offset = 0
    produced = 0
    while header.frame_count is None or produced < header.frame_count:
        data = _read_exact(stream, size)
        if not data:
            if header.frame_count is not None:
                raise RawStreamTruncated(
                    f"stream ended at byte offset {offset} after {produced} frames, "
                    f"expected {header.frame_count}",
                    offset,
                )
            break
        if len(data) < size:
            raise RawStreamTruncated(
                f"truncated frame at byte offset {offset}: "
                f"got {len(data)} of {size} bytes",
                offset,
            )
        frame = np.frombuffer(data, dtype=np.uint8)
        yield frame.reshape(header.height, header.width, 3).copy()
        offset += size
        produced += 1


def write_raw_frame(stream, frame):
    """Append one frame to a raw RGB24 stream."""
    frame = check_u8_frame(frame)
    stream.write(frame.tobytes())


# --- directories of numbered frames -----------------------------------------

def iter_image_dir(directory, pattern="*"):
    """Yield frames from a directory in sorted filename order.

    Files are matched against pattern and decoded by extension. A file
    that fails to decode aborts with an error naming it.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise SequenceError(f"not a directory: {directory}")
    paths = sorted(
        p for p in directory.iterdir() if p.is_file() and fnmatch(p.name, pattern)
    )
    if not paths:
        raise SequenceError(f"no frames in {directory} match {pattern!r}")
    for path in paths:
        try:
            yield read_image(path)
        except CodecError as exc:
            raise SequenceError(f"{path.name}: {exc}") from exc
