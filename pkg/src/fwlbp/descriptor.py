"""The fractal-weighted descriptor: histograms of LBP codes whose bin
weights are sums of per-pixel fractal dimensions, concatenated over
radii and L1-normalized, plus the plain count-histogram baseline and the
chi-square distance used to compare them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeMismatch
from .fractal import FdImage, compute_fd_image
from .image import GrayImage
from .lbp import LbpImage, lbp_image

DEFAULT_RADII = ((1, 8), (2, 8), (3, 8))


@dataclass(frozen=True)
class Histogram:
    """Per-code totals for one (R, N); fractal-weighted or plain counts."""

    bins: np.ndarray
    samples: int
    kind: str  # "fractal_weighted" | "count"

    def __post_init__(self):
        bins = np.asarray(self.bins, dtype=np.float64)
        if len(bins) != 1 << self.samples:
            raise ShapeMismatch(f"expected {1 << self.samples} bins, got {len(bins)}")
        bins.setflags(write=False)
        object.__setattr__(self, "bins", bins)


@dataclass(frozen=True)
class FwlbpDescriptor:
    """Concatenated multi-radius histogram, L1-normalized when `normalized`."""

    values: np.ndarray
    radii: tuple[tuple[float, int], ...]
    normalized: bool

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        expected = sum(1 << n for _, n in self.radii)
        if len(values) != expected:
            raise ShapeMismatch(f"expected length {expected}, got {len(values)}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)


def fractal_weighted_histogram(lbp: LbpImage, fd: FdImage) -> Histogram:
    """bin[p] = sum of FD values over valid pixels whose code equals p."""
    if lbp.shape != fd.shape:
        raise ShapeMismatch(f"LBP {lbp.shape} vs FD {fd.shape}")
    codes = lbp.codes[lbp.valid]
    weights = fd.data[lbp.valid]
    bins = np.bincount(codes, weights=weights, minlength=lbp.num_codes)
    return Histogram(bins, lbp.samples, "fractal_weighted")


def lbp_count_histogram(lbp: LbpImage) -> Histogram:
    """bin[p] = number of valid pixels with code p."""
    codes = lbp.codes[lbp.valid]
    bins = np.bincount(codes, minlength=lbp.num_codes).astype(np.float64)
    return Histogram(bins, lbp.samples, "count")


def _concat_normalize(histograms, radii, kind) -> FwlbpDescriptor:
    values = np.concatenate([h.bins for h in histograms])
    # Short scale ranges (two box-counting layers) can produce a handful of
    # negative per-pixel dimension estimates; a probability-style descriptor
    # cannot carry negative mass, so clamp before normalizing.  A no-op for
    # the default scale range.
    values = np.maximum(values, 0.0)
    total = values.sum()
    if total > 0:
        values = values / total
    return FwlbpDescriptor(values, tuple(radii), normalized=True)


def extract_fwlbp(
    img: GrayImage,
    radii=DEFAULT_RADII,
    r_min: int = 2,
    r_max: int = 7,
    regression_mode: str = "loglog",
) -> FwlbpDescriptor:
    """Full descriptor: one FD image, one weighted histogram per radius,
    concatenation L1-normalized as a whole."""
    fd = compute_fd_image(img, r_min, r_max, mode=regression_mode)
    hists = [fractal_weighted_histogram(lbp_image(img, r, n), fd) for r, n in radii]
    return _concat_normalize(hists, radii, "fractal_weighted")


def extract_lbp_baseline(img: GrayImage, radii=DEFAULT_RADII) -> FwlbpDescriptor:
    """Plain multi-radius LBP count histogram, same layout and normalization."""
    hists = [lbp_count_histogram(lbp_image(img, r, n)) for r, n in radii]
    return _concat_normalize(hists, radii, "count")


def chi_square_distance(a, b) -> float:
    """0.5 * sum (a-b)^2/(a+b); zero-mass bins contribute nothing."""
    av = a.values if isinstance(a, FwlbpDescriptor) else np.asarray(a, dtype=np.float64)
    bv = b.values if isinstance(b, FwlbpDescriptor) else np.asarray(b, dtype=np.float64)
    if av.shape != bv.shape:
        raise ShapeMismatch(f"length {av.shape} vs {bv.shape}")
    denom = av + bv
    num = (av - bv) ** 2
    with np.errstate(invalid="ignore", divide="ignore"):
        terms = np.where(denom > 0, num / np.where(denom > 0, denom, 1.0), 0.0)
    return 0.5 * float(terms.sum())
