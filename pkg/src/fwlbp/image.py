"""Grayscale image container, PGM I/O, and the photometric/geometric
transforms used by the evaluation harness.

Intensities are stored as float64 throughout; quantization happens only
when writing a PGM.  All functions are pure: they return new images and
never mutate their inputs.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConstantImageError,
    DegenerateSizeError,
    InvalidParameter,
    ParseError,
    TruncatedError,
    UnsupportedFormat,
)


@dataclass(frozen=True)
class GrayImage:
    """2-D real-valued intensity matrix (row-major, y down)."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise InvalidParameter(f"image data must be 2-D and non-empty, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InvalidParameter("image contains non-finite values")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape


# ---------------------------------------------------------------------------
# PGM I/O (P2 ASCII / P5 binary, maxval <= 65535)
# ---------------------------------------------------------------------------

_TOKEN = re.compile(rb"\s*(?:#[^\n\r]*[\n\r]\s*)*(\S+)")


def _read_header_tokens(buf: bytes, count: int) -> tuple[list[bytes], int]:
    """Read `count` whitespace-separated tokens, skipping # comments.

    Returns the tokens and the offset just past the last one.
    """
    tokens = []
    pos = 0
    for _ in range(count):
        m = _TOKEN.match(buf, pos)
        if m is None:
            raise ParseError("unexpected end of header")
        tokens.append(m.group(1))
        pos = m.end()
    return tokens, pos


def load_pgm(data: bytes) -> GrayImage:
    """Parse a P2 (ASCII) or P5 (binary) PGM byte string."""
    if len(data) < 2:
        raise ParseError("file too short for a PGM magic number")
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise UnsupportedFormat(f"unsupported magic {magic!r}; only P2/P5 PGM is handled")
    try:
        (w_tok, h_tok, maxval_tok), pos = _read_header_tokens(data[2:], 3)
    except ParseError:
        raise
    try:
        width, height, maxval = int(w_tok), int(h_tok), int(maxval_tok)
    except ValueError as exc:
        raise ParseError(f"non-numeric header token: {exc}") from None
    if width < 1 or height < 1:
        raise ParseError(f"invalid dimensions {width}x{height}")
    if not 0 < maxval <= 65535:
        raise ParseError(f"maxval {maxval} outside (0, 65535]")
    n = width * height

    if magic == b"P2":
        text = data[2 + pos:]
        # strip comments before tokenizing the pixel block
        text = re.sub(rb"#[^\n\r]*", b"", text)
        values = text.split()
        if len(values) < n:
            raise TruncatedError(f"expected {n} pixels, found {len(values)}")
        try:
            pixels = np.array([int(v) for v in values[:n]], dtype=np.float64)
        except ValueError as exc:
            raise ParseError(f"non-numeric pixel value: {exc}") from None
    else:
        # exactly one whitespace byte separates header from payload
        payload = data[2 + pos + 1:]
        bytes_per = 2 if maxval > 255 else 1
        if len(payload) < n * bytes_per:
            raise TruncatedError(f"expected {n * bytes_per} payload bytes, found {len(payload)}")
        dtype = ">u2" if maxval > 255 else "u1"
        pixels = np.frombuffer(payload[: n * bytes_per], dtype=dtype).astype(np.float64)

    return GrayImage(pixels.reshape(height, width))


def write_pgm(img: GrayImage, maxval: int = 255, binary: bool = True) -> bytes:
    """Serialize to PGM, rounding and clipping intensities to [0, maxval]."""
    if maxval not in (255, 65535):
        raise InvalidParameter("maxval must be 255 or 65535")
    q = np.clip(np.rint(img.data), 0, maxval).astype(np.uint16)
    header = f"P5 {img.width} {img.height} {maxval}\n" if binary else f"P2\n{img.width} {img.height}\n{maxval}\n"
    if binary:
        payload = q.astype(">u2" if maxval > 255 else "u1").tobytes()
        return header.encode("ascii") + payload
    lines = "\n".join(" ".join(str(v) for v in row) for row in q)
    return header.encode("ascii") + lines.encode("ascii") + b"\n"


def load_pgm_file(path) -> GrayImage:
    with open(path, "rb") as fh:
        return load_pgm(fh.read())


def write_pgm_file(img: GrayImage, path, maxval: int = 255, binary: bool = True):
    with open(path, "wb") as fh:
        fh.write(write_pgm(img, maxval=maxval, binary=binary))


# ---------------------------------------------------------------------------
# Photometric transforms
# ---------------------------------------------------------------------------

def normalize_intensity(img: GrayImage, target_mean: float = 128.0, target_std: float = 20.0) -> GrayImage:
    """Affinely map the image to the target mean and population std."""
    if img.data.size < 2:
        raise InvalidParameter("need at least 2 pixels to normalize")
    if target_std <= 0:
        raise InvalidParameter("target_std must be positive")
    mean = img.data.mean()
    std = img.data.std()
    if std == 0:
        raise ConstantImageError("cannot normalize a constant image")
    return GrayImage((img.data - mean) * (target_std / std) + target_mean)


def add_gaussian_noise(img: GrayImage, snr_db: float, seed: int) -> GrayImage:
    """Add white Gaussian noise at the requested SNR (dB).

    Noise variance is signal_power / 10^(snr_db/10) with signal power the
    mean squared intensity.  ``snr_db=inf`` is the noiseless sentinel.
    """
    if math.isinf(snr_db) and snr_db > 0:
        return GrayImage(img.data.copy())
    signal_power = np.mean(img.data ** 2)
    if signal_power == 0:
        raise ConstantImageError("zero signal power; SNR undefined")
    noise_var = signal_power / (10.0 ** (snr_db / 10.0))
    rng = np.random.default_rng(seed)
    noise = rng.normal(0.0, math.sqrt(noise_var), size=img.shape)
    return GrayImage(img.data + noise)


# ---------------------------------------------------------------------------
# Geometric transforms (bilinear)
# ---------------------------------------------------------------------------

def _bilinear_sample(data: np.ndarray, ys: np.ndarray, xs: np.ndarray, fill: float) -> np.ndarray:
    """Sample `data` at real-valued (ys, xs); out-of-support points get `fill`."""
    h, w = data.shape
    inside = (ys >= 0) & (ys <= h - 1) & (xs >= 0) & (xs <= w - 1)
    ysc = np.clip(ys, 0, h - 1)
    xsc = np.clip(xs, 0, w - 1)
    y0 = np.floor(ysc).astype(np.intp)
    x0 = np.floor(xsc).astype(np.intp)
    y1 = np.minimum(y0 + 1, h - 1)
    x1 = np.minimum(x0 + 1, w - 1)
    fy = ysc - y0
    fx = xsc - x0
    out = (
        data[y0, x0] * (1 - fy) * (1 - fx)
        + data[y0, x1] * (1 - fy) * fx
        + data[y1, x0] * fy * (1 - fx)
        + data[y1, x1] * fy * fx
    )
    return np.where(inside, out, fill)


def resample(img: GrayImage, factor: float) -> GrayImage:
    """Bilinear resampling by a uniform scale factor (corner-aligned grid)."""
    if factor <= 0:
        raise InvalidParameter("factor must be positive")
    out_h = int(round(img.height * factor))
    out_w = int(round(img.width * factor))
    if out_h < 2 or out_w < 2:
        raise DegenerateSizeError(f"output {out_w}x{out_h} below the 2x2 minimum")
    # map output pixel centers onto the source grid with endpoints aligned,
    # so factor 1.0 is the exact identity
    ys = np.linspace(0.0, img.height - 1, out_h)
    xs = np.linspace(0.0, img.width - 1, out_w)
    gy, gx = np.meshgrid(ys, xs, indexing="ij")
    return GrayImage(_bilinear_sample(img.data, gy, gx, 0.0))


def rotate(img: GrayImage, degrees: float) -> GrayImage:
    """Rotate about the image center, bilinear, same output size.

    Out-of-support samples are filled with the image mean so that the
    fill region does not inject artificial dark-corner patterns.
    """
    theta = math.radians(degrees)
    c, s = math.cos(theta), math.sin(theta)
    cy = (img.height - 1) / 2.0
    cx = (img.width - 1) / 2.0
    gy, gx = np.meshgrid(np.arange(img.height, dtype=np.float64),
                         np.arange(img.width, dtype=np.float64), indexing="ij")
    dy = gy - cy
    dx = gx - cx
    # inverse mapping: output pixel pulls from the source rotated by -theta
    src_x = cx + c * dx + s * dy
    src_y = cy - s * dx + c * dy
    fill = float(img.data.mean())
    return GrayImage(_bilinear_sample(img.data, src_y, src_x, fill))


def central_crop_for_rotation(img: GrayImage) -> GrayImage:
    """Largest centered square guaranteed free of rotation fill for any angle."""
    side = int(math.floor(min(img.height, img.width) / math.sqrt(2.0)))
    if side < 2:
        raise DegenerateSizeError("image too small for a rotation-safe crop")
    y0 = (img.height - side) // 2
    x0 = (img.width - side) // 2
    return GrayImage(img.data[y0:y0 + side, x0:x0 + side].copy())
