"""Differential box counting over a Gaussian scale space and the
per-pixel log-log regression that turns the stack into an FD image.

For scale r, every pixel gets a box count b = floor((g_max - g_min)/r) + 1
from the r x r window around it (left extent ceil((r-1)/2), clamped at the
borders), scaled by (L/r)^2.  The FD value is the least-squares slope of
log(box value) against log(1/r) across the L layers; a `linear` mode that
regresses the raw values against r is kept for comparison.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import InsufficientLayers, InvalidParameter, ShapeMismatch
from .image import GrayImage
from .scalespace import ScaleSpace, build_scale_space


@dataclass(frozen=True)
class IntermediateStack:
    """Per-scale box-count images (strictly positive values)."""

    layers: tuple[GrayImage, ...]
    scales: tuple[int, ...]

    def __post_init__(self):
        if len(self.layers) != len(self.scales):
            raise ShapeMismatch("layer/scale count mismatch")

    @property
    def num_layers(self) -> int:
        return len(self.layers)


@dataclass(frozen=True)
class FdImage:
    """Per-pixel fractal-dimension estimate (regression slope)."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float64)
        if not np.all(np.isfinite(arr)):
            raise InvalidParameter("FD image contains non-finite values")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape


def dbc_layer(layer: GrayImage, r: int, num_layers: int) -> GrayImage:
    """Box-count image of one smoothed layer at scale r."""
    if r < 2:
        raise InvalidParameter("DBC window must be at least 2")
    if layer.height < r or layer.width < r:
        raise InvalidParameter(f"layer {layer.width}x{layer.height} smaller than window {r}")
    # window of width r with left extent ceil((r-1)/2); border windows clamp.
    # (max/min are unchanged by edge replication vs. true clamping)
    g_max = ndimage.maximum_filter(layer.data, size=r, mode="nearest")
    g_min = ndimage.minimum_filter(layer.data, size=r, mode="nearest")
    b = np.floor((g_max - g_min) / r) + 1.0
    return GrayImage(b * (num_layers / r) ** 2)


def build_intermediate_stack(ss: ScaleSpace) -> IntermediateStack:
    scales = tuple(ss.scales)
    layers = tuple(dbc_layer(layer, r, ss.num_layers) for layer, r in zip(ss.layers, scales))
    return IntermediateStack(layers, scales)


def fd_regression(stack: IntermediateStack, mode: str = "loglog") -> FdImage:
    """Per-pixel slope across the stack.

    loglog: ordinate log(omega), abscissa log(1/r)  (the FD estimate).
    linear: ordinate omega, abscissa r  (literal reading, for comparison).
    """
    L = stack.num_layers
    if L < 2:
        raise InsufficientLayers("need at least 2 scale layers for a slope")
    omega = np.stack([layer.data for layer in stack.layers], axis=0)
    if mode == "loglog":
        t = np.log(1.0 / np.asarray(stack.scales, dtype=np.float64))
        theta = np.log(omega)
    elif mode == "linear":
        t = np.asarray(stack.scales, dtype=np.float64)
        theta = omega
    else:
        raise InvalidParameter(f"unknown regression mode {mode!r}")
    st = t.sum()
    stt = (t * t).sum()
    s_theta = theta.sum(axis=0)
    s_cross = np.tensordot(t, theta, axes=(0, 0))
    psi1 = stt - st * st / L
    psi2 = s_cross - st * s_theta / L
    return FdImage(psi2 / psi1)


def compute_fd_image(img: GrayImage, r_min: int = 2, r_max: int = 7, mode: str = "loglog") -> FdImage:
    """Full pipeline: scale space -> box counting -> per-pixel regression."""
    if r_min < 2:
        raise InvalidParameter("r_min must be >= 2")
    ss = build_scale_space(img, r_min, r_max)
    return fd_regression(build_intermediate_stack(ss), mode=mode)


def fd_image_to_gray(fd: FdImage) -> GrayImage:
    """Affine map of the FD values to [0, 255] for PGM export."""
    lo = fd.data.min()
    hi = fd.data.max()
    if hi == lo:
        return GrayImage(np.zeros_like(fd.data))
    return GrayImage((fd.data - lo) * (255.0 / (hi - lo)))
