"""Fractal-weighted local binary pattern texture descriptor toolkit."""

from .config import PipelineConfig
from .descriptor import (
    FwlbpDescriptor,
    Histogram,
    chi_square_distance,
    extract_fwlbp,
    extract_lbp_baseline,
    fractal_weighted_histogram,
    lbp_count_histogram,
)
from .fractal import FdImage, compute_fd_image
from .image import (
    GrayImage,
    add_gaussian_noise,
    load_pgm,
    load_pgm_file,
    normalize_intensity,
    resample,
    rotate,
    write_pgm,
    write_pgm_file,
)
from .lbp import LbpImage, lbp_image, sample_neighbors
from .scalespace import build_scale_space, convolve_separable, gaussian_kernel_1d

__version__ = "0.1.0"

__all__ = [
    "PipelineConfig",
    "FwlbpDescriptor",
    "Histogram",
    "chi_square_distance",
    "extract_fwlbp",
    "extract_lbp_baseline",
    "fractal_weighted_histogram",
    "lbp_count_histogram",
    "FdImage",
    "compute_fd_image",
    "GrayImage",
    "add_gaussian_noise",
    "load_pgm",
    "load_pgm_file",
    "normalize_intensity",
    "resample",
    "rotate",
    "write_pgm",
    "write_pgm_file",
    "LbpImage",
    "lbp_image",
    "sample_neighbors",
    "build_scale_space",
    "convolve_separable",
    "gaussian_kernel_1d",
    "__version__",
]
