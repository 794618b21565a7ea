"""Gaussian scale space via separable 1-D convolution.

Layer r is the source image smoothed with a size-r kernel of sigma r/2.
Kernel size equals the scale, so even sizes occur; their taps are placed
symmetrically about the fractional center (size-1)/2, which keeps the
tap vector symmetric (convolution and correlation coincide).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ImageTooSmall, InvalidParameter
from .image import GrayImage


@dataclass(frozen=True)
class GaussianKernel1D:
    taps: np.ndarray
    sigma: float

    def __post_init__(self):
        taps = np.asarray(self.taps, dtype=np.float64)
        taps.setflags(write=False)
        object.__setattr__(self, "taps", taps)

    @property
    def size(self) -> int:
        return len(self.taps)


@dataclass(frozen=True)
class ScaleSpace:
    layers: tuple[GrayImage, ...]
    r_min: int
    r_max: int

    @property
    def scales(self) -> list[int]:
        return list(range(self.r_min, self.r_max + 1))

    @property
    def num_layers(self) -> int:
        return len(self.layers)


def gaussian_kernel_1d(size: int, sigma: float) -> GaussianKernel1D:
    """Sampled Gaussian of `size` taps, normalized to unit sum."""
    if size < 1:
        raise InvalidParameter("kernel size must be >= 1")
    if sigma <= 0:
        raise InvalidParameter("sigma must be positive")
    center = (size - 1) / 2.0
    i = np.arange(size, dtype=np.float64)
    taps = np.exp(-((i - center) ** 2) / (2.0 * sigma * sigma))
    taps /= taps.sum()
    return GaussianKernel1D(taps, float(sigma))


def _correlate_axis(data: np.ndarray, taps: np.ndarray, axis: int) -> np.ndarray:
    """1-D correlation along an axis with edge replication.

    The tap window at output index i covers input indices
    [i - (size-1)//2, i + size - 1 - (size-1)//2].
    """
    size = len(taps)
    if size == 1:
        return data * taps[0]
    left = (size - 1) // 2
    right = size - 1 - left
    pad = [(0, 0), (0, 0)]
    pad[axis] = (left, right)
    padded = np.pad(data, pad, mode="edge")
    windows = np.lib.stride_tricks.sliding_window_view(padded, size, axis=axis)
    return windows @ taps


def convolve_separable(img: GrayImage, kernel: GaussianKernel1D) -> GrayImage:
    """Horizontal then vertical pass of the 1-D kernel, edge replication."""
    out = _correlate_axis(img.data, kernel.taps, axis=1)
    out = _correlate_axis(out, kernel.taps, axis=0)
    return GrayImage(out)


def build_scale_space(img: GrayImage, r_min: int = 2, r_max: int = 7) -> ScaleSpace:
    """Smoothed layers for every scale r in [r_min, r_max]."""
    if not 1 <= r_min <= r_max:
        raise InvalidParameter(f"need 1 <= r_min <= r_max, got ({r_min}, {r_max})")
    if img.height < r_max or img.width < r_max:
        raise ImageTooSmall(f"image {img.width}x{img.height} smaller than r_max={r_max}")
    layers = tuple(
        convolve_separable(img, gaussian_kernel_1d(r, r / 2.0))
        for r in range(r_min, r_max + 1)
    )
    return ScaleSpace(layers, r_min, r_max)
