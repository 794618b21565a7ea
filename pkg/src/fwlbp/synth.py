"""Procedural texture generators used as a desk-scale stand-in for the
large texture databases.  Everything is deterministic per seed.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import ndimage

from .errors import InvalidParameter
from .image import GrayImage, central_crop_for_rotation, resample, rotate

KINDS = ("sinusoid", "checker", "fractal_noise", "blob")


def synth_texture(kind: str, params: dict | None, size: int, seed: int) -> GrayImage:
    """Dispatch to one generator; `params` defaults are per kind."""
    if size < 64:
        raise InvalidParameter("size must be >= 64")
    params = dict(params or {})
    rng = np.random.default_rng(seed)
    if kind == "sinusoid":
        img = _sinusoid(size, rng, **params)
    elif kind == "checker":
        img = _checker(size, rng, **params)
    elif kind == "fractal_noise":
        img = _fractal_noise(size, rng, **params)
    elif kind == "blob":
        img = _blob(size, rng, **params)
    else:
        raise InvalidParameter(f"unknown texture kind {kind!r}")
    return GrayImage(img)


def _micro_noise(rng, size):
    """Unit-std white microtexture mixed into the structured generators.

    Keeping it full-band matters: the local binary comparisons of textures
    with perfectly smooth regions are flipped by even weak sensor noise,
    whereas a texture that already carries broadband micro-contrast has
    code statistics that barely move when more noise is added.
    """
    return rng.standard_normal((size, size))


def _to_byte_range(field: np.ndarray) -> np.ndarray:
    lo, hi = field.min(), field.max()
    if hi == lo:
        return np.full_like(field, 127.5)
    return (field - lo) * (255.0 / (hi - lo))


def _sinusoid(size, rng, frequency=8.0, angle_deg=30.0, harmonics=3, noise=0.05):
    """Oriented grating with a few harmonics and band-limited noise."""
    if frequency < 0:
        raise InvalidParameter("frequency must be >= 0")
    y, x = np.mgrid[0:size, 0:size].astype(np.float64) / size
    theta = np.deg2rad(angle_deg)
    u = x * np.cos(theta) + y * np.sin(theta)
    v = -x * np.sin(theta) + y * np.cos(theta)
    field = np.zeros((size, size))
    for h in range(1, int(harmonics) + 1):
        phase = rng.uniform(0, 2 * np.pi)
        field += np.sin(2 * np.pi * frequency * h * u + phase) / h
        field += 0.4 * np.sin(2 * np.pi * frequency * h * v + rng.uniform(0, 2 * np.pi)) / h
    if noise:
        field += noise * _micro_noise(rng, size)
    return _to_byte_range(field)


def _checker(size, rng, period=16, jitter=0.15, noise=0.08):
    """Checkerboard softened by per-cell brightness jitter and pixel noise."""
    if period < 2:
        raise InvalidParameter("period must be >= 2")
    y, x = np.mgrid[0:size, 0:size]
    cells_y = y // period
    cells_x = x // period
    parity = ((cells_y + cells_x) % 2).astype(np.float64)
    n_cells = int(np.ceil(size / period))
    cell_gain = rng.uniform(1 - jitter, 1 + jitter, size=(n_cells, n_cells))
    field = (parity * 2 - 1) * cell_gain[cells_y, cells_x]
    # soften the cell edges so the texture stays roughly band-limited
    field = ndimage.gaussian_filter(field, 1.5, mode="nearest")
    if noise:
        field += noise * _micro_noise(rng, size)
    return _to_byte_range(field)


def _fractal_noise(size, rng, beta=3.0, blur=1.0, aniso=0.0, orientation_deg=0.0,
                   ridge=False):
    """Spectral synthesis: random phases under a 1/f^(beta/2) amplitude law.

    The power-law spectrum makes the surface approximately self-similar
    over the box-counting scale range, which is what the scale-invariance
    properties rely on.  `aniso` modulates the amplitude with orientation,
    `ridge` folds the field into crease-like structures, and `blur` gives
    the surface a small inner scale so bilinear resampling cannot destroy
    detail the box counter would otherwise see.
    """
    if beta <= 0:
        raise InvalidParameter("beta must be positive")
    if not 0 <= aniso < 1:
        raise InvalidParameter("aniso must be in [0, 1)")
    fy = np.fft.fftfreq(size)[:, None]
    fx = np.fft.fftfreq(size)[None, :]
    radius = np.sqrt(fy * fy + fx * fx)
    radius[0, 0] = 1.0  # DC handled separately
    amplitude = radius ** (-beta / 2.0)
    if aniso:
        phi = np.arctan2(fy, fx) - np.deg2rad(orientation_deg)
        amplitude = amplitude * (1.0 + aniso * np.cos(2.0 * phi))
    amplitude[0, 0] = 0.0
    phases = rng.uniform(0, 2 * np.pi, size=(size, size))
    spectrum = amplitude * np.exp(1j * phases)
    field = np.real(np.fft.ifft2(spectrum))
    if ridge:
        field = -np.abs(field)
    if blur:
        field = ndimage.gaussian_filter(field, blur, mode="wrap")
    return _to_byte_range(field)


def _blob(size, rng, count=40, sigma_range=(3.0, 9.0), alpha=None, sigma_min=1.5,
          blur=0.0, noise=0.02):
    """Sum of randomly placed Gaussian bumps of random width and sign.

    With `alpha` set, bump widths follow a Pareto law starting at
    `sigma_min` (capped at size/4), giving a scale-free size distribution;
    otherwise widths are uniform over `sigma_range`.
    """
    if count < 1:
        raise InvalidParameter("count must be >= 1")
    y, x = np.mgrid[0:size, 0:size].astype(np.float64)
    field = np.zeros((size, size))
    for _ in range(int(count)):
        cy, cx = rng.uniform(0, size, size=2)
        if alpha is not None:
            sigma = min(sigma_min * (1.0 + rng.pareto(alpha)), size / 4.0)
        else:
            sigma = rng.uniform(*sigma_range)
        sign = rng.choice([-1.0, 1.0])
        field += sign * np.exp(-((y - cy) ** 2 + (x - cx) ** 2) / (2 * sigma * sigma))
    if blur:
        field = ndimage.gaussian_filter(field, blur, mode="nearest")
    if noise:
        field += noise * _micro_noise(rng, size)
    return _to_byte_range(field)


def default_corpus(size: int = 256, seed: int = 7) -> list[tuple[str, GrayImage]]:
    """12 visually distinct, approximately scale-free textures.

    All entries are drawn from the self-similar families (power-law noise
    and Pareto-sized blobs): textures with a characteristic length (pure
    gratings, hard-edged checkers) are not meaningful subjects for
    scale-invariance oracles because bilinear resampling shifts their one
    dominant scale instead of mapping the texture onto itself.
    """
    specs = [
        ("fbm_b30", "fractal_noise", {"beta": 3.0}),
        ("fbm_b31", "fractal_noise", {"beta": 3.1}),
        ("fbm_b32", "fractal_noise", {"beta": 3.2}),
        ("fbm_b34", "fractal_noise", {"beta": 3.4}),
        ("fbm_b30_soft", "fractal_noise", {"beta": 3.0, "blur": 1.3}),
        ("fbm_b31_aniso", "fractal_noise", {"beta": 3.1, "aniso": 0.4, "orientation_deg": 20.0}),
        ("fbm_b32_aniso", "fractal_noise", {"beta": 3.2, "aniso": 0.5, "orientation_deg": 60.0}),
        ("fbm_b33_aniso", "fractal_noise", {"beta": 3.3, "aniso": 0.6, "orientation_deg": 110.0}),
        ("ridge_b34", "fractal_noise", {"beta": 3.4, "ridge": True}),
        ("fbm_b32_soft", "fractal_noise", {"beta": 3.2, "blur": 1.2}),
        ("fbm_b35", "fractal_noise", {"beta": 3.5}),
        ("blobs_pareto_a12", "blob", {"count": 150, "alpha": 1.2, "sigma_min": 1.5, "blur": 1.0}),
    ]
    return [
        (name, synth_texture(kind, params, size, seed + i))
        for i, (name, kind, params) in enumerate(specs)
    ]


# ---------------------------------------------------------------------------
# Classification corpus with geometric jitter
# ---------------------------------------------------------------------------

CLASS_SPECS = [
    ("ridges", "fractal_noise", {"beta": 2.2, "ridge": True, "blur": 0.0}),
    ("fine_grating", "sinusoid", {"frequency": 16.0, "angle_deg": 70.0, "noise": 0.5}),
    ("coarse_checker", "checker", {"period": 24, "noise": 0.4}),
    ("spots", "blob", {"count": 60, "sigma_range": (5.0, 10.0), "noise": 0.35}),
    ("rough_noise", "fractal_noise", {"beta": 2.2, "blur": 0.0}),
    ("grating", "sinusoid", {"frequency": 8.0, "angle_deg": 25.0, "noise": 0.5}),
    ("checkerboard", "checker", {"period": 12, "noise": 0.4}),
    ("smooth_noise", "fractal_noise", {"beta": 3.0, "blur": 0.0}),
]


def make_class_sample(
    class_idx: int,
    sample_idx: int,
    size: int,
    seed: int,
    scale_jitter: tuple | None = None,
    rotation_jitter: tuple | None = None,
):
    """One jittered sample of a corpus class, plus its provenance record.

    A larger base texture is generated, rotated, cropped to the rotation-safe
    square, rescaled, and finally center-cropped to `size`, so the output
    never contains rotation fill.
    """
    if class_idx >= len(CLASS_SPECS):
        raise InvalidParameter(f"at most {len(CLASS_SPECS)} corpus classes are defined")
    name, kind, params = CLASS_SPECS[class_idx]
    rng = np.random.default_rng([seed, class_idx, sample_idx])
    angle = float(rng.uniform(*rotation_jitter)) if rotation_jitter else 0.0
    factor = float(rng.uniform(*scale_jitter)) if scale_jitter else 1.0
    min_factor = scale_jitter[0] if scale_jitter else 1.0
    gen_size = int(math.ceil(size * math.sqrt(2.0) * 1.05 / min_factor))
    base = synth_texture(kind, params, gen_size, int(rng.integers(0, 2**31)))
    img = base
    if rotation_jitter:
        img = central_crop_for_rotation(rotate(img, angle))
    if scale_jitter:
        img = resample(img, factor)
    if img.height < size or img.width < size:
        raise InvalidParameter("jitter ranges leave no room for the final crop")
    y0 = (img.height - size) // 2
    x0 = (img.width - size) // 2
    out = GrayImage(img.data[y0:y0 + size, x0:x0 + size].copy())
    record = {"class": name, "kind": kind, "scale": factor, "rotation": angle}
    return out, record


def make_classification_corpus(
    num_classes: int = 4,
    per_class: int = 20,
    size: int = 128,
    seed: int = 11,
    scale_jitter: tuple | None = (0.7, 1.4),
    rotation_jitter: tuple | None = (0.0, 90.0),
):
    """(images, labels, class_names, records) for the evaluation harness."""
    if not 2 <= num_classes <= len(CLASS_SPECS):
        raise InvalidParameter(f"num_classes must be in [2, {len(CLASS_SPECS)}]")
    images, labels, records = [], [], []
    class_names = [CLASS_SPECS[c][0] for c in range(num_classes)]
    for c in range(num_classes):
        for i in range(per_class):
            img, record = make_class_sample(c, i, size, seed, scale_jitter, rotation_jitter)
            images.append(img)
            labels.append(c)
            records.append(record)
    return images, labels, class_names, records
