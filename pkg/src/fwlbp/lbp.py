"""Circular local binary patterns with bilinear neighbor sampling.

Sample 0 sits at angle 0 (east) and the samples proceed counter-clockwise
in image coordinates (y grows downward, hence -sin).  Ties compare with
>=, i.e. a neighbor equal to the center contributes a 1 bit.  Codes are
only computed for pixels whose whole neighborhood lies inside the image;
the border band of width ceil(R) is marked invalid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BorderViolation, ImageTooSmall, InvalidParameter
from .image import GrayImage

_SNAP = 1e-9  # treat near-integer sample coordinates as exact lattice points


@dataclass(frozen=True)
class LbpImage:
    """Integer code matrix plus the validity mask for one (R, N)."""

    codes: np.ndarray
    valid: np.ndarray
    radius: float
    samples: int

    def __post_init__(self):
        codes = np.asarray(self.codes, dtype=np.int64)
        valid = np.asarray(self.valid, dtype=bool)
        codes.setflags(write=False)
        valid.setflags(write=False)
        object.__setattr__(self, "codes", codes)
        object.__setattr__(self, "valid", valid)

    @property
    def shape(self) -> tuple[int, int]:
        return self.codes.shape

    @property
    def num_codes(self) -> int:
        return 1 << self.samples


def _neighbor_offsets(radius: float, samples: int) -> list[tuple[float, float]]:
    """(dy, dx) for each sample, snapped to the integer lattice when exact."""
    offsets = []
    for k in range(samples):
        angle = 2.0 * math.pi * k / samples
        dx = radius * math.cos(angle)
        dy = -radius * math.sin(angle)
        if abs(dx - round(dx)) < _SNAP:
            dx = round(dx)
        if abs(dy - round(dy)) < _SNAP:
            dy = round(dy)
        offsets.append((dy, dx))
    return offsets


def sample_neighbors(img: GrayImage, x: int, y: int, radius: float, samples: int) -> np.ndarray:
    """Bilinearly sampled circular neighborhood of one pixel."""
    if samples < 1:
        raise InvalidParameter("need at least one sample")
    border = math.ceil(radius)
    if not (border <= x < img.width - border and border <= y < img.height - border):
        raise BorderViolation(f"pixel ({x},{y}) closer than {border} to the border")
    data = img.data
    out = np.empty(samples)
    for k, (dy, dx) in enumerate(_neighbor_offsets(radius, samples)):
        sy, sx = y + dy, x + dx
        y0, x0 = int(math.floor(sy)), int(math.floor(sx))
        fy, fx = sy - y0, sx - x0
        y1 = min(y0 + 1, img.height - 1)
        x1 = min(x0 + 1, img.width - 1)
        out[k] = (
            data[y0, x0] * (1 - fy) * (1 - fx)
            + data[y0, x1] * (1 - fy) * fx
            + data[y1, x0] * fy * (1 - fx)
            + data[y1, x1] * fy * fx
        )
    return out


def lbp_image(img: GrayImage, radius: float, samples: int = 8) -> LbpImage:
    """LBP code image; bit n-1 is set where neighbor n >= center."""
    if samples < 1 or samples > 24:
        raise InvalidParameter("sample count must be in [1, 24]")
    border = math.ceil(radius)
    if img.height <= 2 * border or img.width <= 2 * border:
        raise ImageTooSmall(f"image {img.width}x{img.height} too small for radius {radius}")
    h, w = img.shape
    data = img.data
    center = data[border:h - border, border:w - border]
    codes_inner = np.zeros(center.shape, dtype=np.int64)
    for k, (dy, dx) in enumerate(_neighbor_offsets(radius, samples)):
        y0 = int(math.floor(dy))
        x0 = int(math.floor(dx))
        fy = dy - y0
        fx = dx - x0
        # neighbor field over the valid region, built from shifted slices
        def shifted(oy, ox):
            return data[border + oy:h - border + oy, border + ox:w - border + ox]
        if fy == 0 and fx == 0:
            neighbor = shifted(y0, x0)
        else:
            neighbor = (
                shifted(y0, x0) * (1 - fy) * (1 - fx)
                + shifted(y0, x0 + 1) * (1 - fy) * fx
                + shifted(y0 + 1, x0) * fy * (1 - fx)
                + shifted(y0 + 1, x0 + 1) * fy * fx
            )
        codes_inner |= (neighbor >= center).astype(np.int64) << k
    codes = np.zeros((h, w), dtype=np.int64)
    codes[border:h - border, border:w - border] = codes_inner
    valid = np.zeros((h, w), dtype=bool)
    valid[border:h - border, border:w - border] = True
    return LbpImage(codes, valid, float(radius), samples)
