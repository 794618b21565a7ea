"""Desk-scale experimental harness: dataset ingestion, stratified k-fold
cross-validation of the full pipeline, noise and r_max sweeps, and the
scale/rotation invariance distance tables.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import PipelineConfig
from .descriptor import chi_square_distance, extract_fwlbp, extract_lbp_baseline
from .errors import InsufficientSamples, InvalidParameter
from .features import FeatureMatrix, pca_fit, pca_transform, sqrt_transform
from .image import (
    GrayImage,
    add_gaussian_noise,
    central_crop_for_rotation,
    load_pgm_file,
    normalize_intensity,
    resample,
    rotate,
)
from .nsc import SubspacePolicy, nsc_fit, nsc_predict

SCALE_FACTORS = tuple(float(f) for f in np.geomspace(0.5, 2.0, 9))
ROTATION_ANGLES = (0.0, 5.0, 10.0, 15.0, 30.0, 45.0, 60.0, 75.0, 90.0)


@dataclass
class Dataset:
    """Samples are (ref, label_index); a ref is either a path or an image."""

    samples: list
    class_names: list

    def __post_init__(self):
        for _, label in self.samples:
            if not 0 <= label < len(self.class_names):
                raise InvalidParameter(f"label {label} out of range")

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def labels(self) -> np.ndarray:
        return np.array([label for _, label in self.samples], dtype=np.int64)

    def image(self, i: int) -> GrayImage:
        ref, _ = self.samples[i]
        return ref if isinstance(ref, GrayImage) else load_pgm_file(ref)


def load_dataset(root) -> Dataset:
    """Directory layout: root/class_name/*.pgm, label = directory name."""
    root = Path(root)
    class_dirs = sorted(d for d in root.iterdir() if d.is_dir())
    if not class_dirs:
        raise InvalidParameter(f"no class directories under {root}")
    class_names = [d.name for d in class_dirs]
    samples = []
    for idx, d in enumerate(class_dirs):
        files = sorted(d.glob("*.pgm"))
        if not files:
            raise InvalidParameter(f"class directory {d} holds no .pgm files")
        samples.extend((f, idx) for f in files)
    return Dataset(samples, class_names)


@dataclass
class EvalReport:
    fold_accuracies: list
    confusion: np.ndarray
    config: dict
    extra: dict = field(default_factory=dict)

    @property
    def mean_accuracy(self) -> float:
        return float(np.mean(self.fold_accuracies))

    @property
    def std_accuracy(self) -> float:
        return float(np.std(self.fold_accuracies))

    def to_dict(self) -> dict:
        return {
            "fold_accuracies": [float(a) for a in self.fold_accuracies],
            "mean_accuracy": self.mean_accuracy,
            "std_accuracy": self.std_accuracy,
            "confusion": self.confusion.tolist(),
            "config": self.config,
            **self.extra,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


# ---------------------------------------------------------------------------
# Descriptor extraction
# ---------------------------------------------------------------------------

def image_descriptor(img: GrayImage, config: PipelineConfig) -> np.ndarray:
    """normalize -> FWLBP; the canonical per-image feature vector."""
    norm = normalize_intensity(img, config.norm_mean, config.norm_std)
    return extract_fwlbp(
        norm, config.radii, config.r_min, config.r_max, config.regression_mode
    ).values


def noisy_image_descriptor(img: GrayImage, config: PipelineConfig, snr_db: float, seed: int) -> np.ndarray:
    """Descriptor of a noise-corrupted evaluation copy.

    Default order is normalize then add noise; the flag flips it so noise
    lands on the raw intensities and normalization runs afterwards.
    """
    if config.noise_before_normalize:
        noisy = add_gaussian_noise(img, snr_db, seed)
        norm = normalize_intensity(noisy, config.norm_mean, config.norm_std)
    else:
        norm = normalize_intensity(img, config.norm_mean, config.norm_std)
        norm = add_gaussian_noise(norm, snr_db, seed)
    return extract_fwlbp(
        norm, config.radii, config.r_min, config.r_max, config.regression_mode
    ).values


def dataset_descriptors(ds: Dataset, config: PipelineConfig) -> FeatureMatrix:
    rows = np.stack([image_descriptor(ds.image(i), config) for i in range(len(ds))])
    return FeatureMatrix(rows, labels=ds.labels)


# ---------------------------------------------------------------------------
# Cross-validation
# ---------------------------------------------------------------------------

def kfold_split(m: int, k: int, labels: np.ndarray, seed: int) -> np.ndarray:
    """Stratified fold assignment: per-class counts differ by at most one."""
    if k < 2:
        raise InvalidParameter("need at least 2 folds")
    labels = np.asarray(labels, dtype=np.int64)
    if len(labels) != m:
        raise InvalidParameter("labels length must equal m")
    rng = np.random.default_rng(seed)
    assignment = np.empty(m, dtype=np.int64)
    offset = 0
    for c in np.unique(labels):
        idx = np.flatnonzero(labels == c)
        if len(idx) < k:
            raise InsufficientSamples(f"class {c} has {len(idx)} samples; need >= {k}")
        rng.shuffle(idx)
        # deal round-robin, rotating the starting fold per class to balance
        folds = (np.arange(len(idx)) + offset) % k
        assignment[idx] = folds
        offset += len(idx)
    return assignment


def _signed_sqrt(x: np.ndarray) -> np.ndarray:
    # PCA coordinates may be negative; keep the sign, damp the magnitude
    return np.sign(x) * np.sqrt(np.abs(x))


def _policy(config: PipelineConfig) -> SubspacePolicy:
    if config.subspace_dim is not None:
        return SubspacePolicy.fixed(config.subspace_dim)
    return SubspacePolicy.energy(config.subspace_energy)


def _fit_fold(x_train: np.ndarray, y_train: np.ndarray, config: PipelineConfig):
    """sqrt -> PCA -> NSC on training data only; returns a predictor."""
    if config.sqrt_placement == "before":
        x_train = sqrt_transform(x_train)
    k = min(config.pca_k, x_train.shape[0] - 1, x_train.shape[1])
    pca = pca_fit(FeatureMatrix(x_train), k)
    z_train = pca_transform(pca, x_train)
    if config.sqrt_placement == "after":
        z_train = _signed_sqrt(z_train)
    model = nsc_fit(FeatureMatrix(z_train, labels=y_train), _policy(config))

    def predict(x_row: np.ndarray) -> int:
        if config.sqrt_placement == "before":
            x_row = sqrt_transform(x_row)
        z = pca_transform(pca, x_row)
        if config.sqrt_placement == "after":
            z = _signed_sqrt(z)
        return nsc_predict(model, z)

    return predict


def cross_validate_features(
    features: FeatureMatrix,
    config: PipelineConfig,
    num_classes: int | None = None,
    test_features: FeatureMatrix | None = None,
) -> EvalReport:
    """k-fold CV over precomputed descriptors.

    When `test_features` is given (e.g. noise-corrupted copies), models are
    fit on clean rows and evaluated on the corrupted rows of each held-out
    fold; labels must match row-for-row.
    """
    X = features.data
    y = features.labels
    if y is None:
        raise InvalidParameter("features need labels")
    X_test_src = test_features.data if test_features is not None else X
    C = num_classes if num_classes is not None else int(y.max()) + 1
    folds = kfold_split(len(y), config.folds, y, config.seed)
    accuracies = []
    confusion = np.zeros((C, C), dtype=np.int64)
    for f in range(config.folds):
        test_idx = np.flatnonzero(folds == f)
        train_idx = np.flatnonzero(folds != f)
        predict = _fit_fold(X[train_idx], y[train_idx], config)
        hits = 0
        for i in test_idx:
            pred = predict(X_test_src[i])
            confusion[y[i], pred] += 1
            hits += int(pred == y[i])
        accuracies.append(hits / len(test_idx))
    return EvalReport(accuracies, confusion, json.loads(config.to_json()))


def cross_validate(ds: Dataset, config: PipelineConfig) -> EvalReport:
    report = cross_validate_features(dataset_descriptors(ds, config), config,
                                     num_classes=len(ds.class_names))
    report.extra["class_names"] = list(ds.class_names)
    return report


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

def noise_sweep(ds: Dataset, snr_levels, config: PipelineConfig) -> list:
    """One CV report per SNR level; training rows clean, test rows noisy."""
    clean = dataset_descriptors(ds, config)
    reports = []
    for snr in snr_levels:
        noisy_rows = np.stack([
            noisy_image_descriptor(ds.image(i), config, snr, config.seed + 1000 + i)
            for i in range(len(ds))
        ])
        noisy = FeatureMatrix(noisy_rows, labels=ds.labels)
        report = cross_validate_features(clean, config, num_classes=len(ds.class_names),
                                         test_features=noisy)
        report.extra["snr_db"] = float(snr)
        reports.append(report)
    return reports


def rmax_sweep(ds: Dataset, rmax_values, config: PipelineConfig) -> list:
    """Full CV per r_max; degenerate values are reported, not raised."""
    results = []
    for rmax in rmax_values:
        if rmax <= config.r_min:
            results.append({
                "r_max": int(rmax),
                "report": None,
                "error": f"r_max={rmax} leaves fewer than 2 scale layers; slope undefined",
            })
            continue
        cfg = PipelineConfig(**{**json.loads(config.to_json()), "r_max": int(rmax)})
        report = cross_validate(ds, cfg)
        report.extra["r_max"] = int(rmax)
        results.append({"r_max": int(rmax), "report": report, "error": None})
    return results


# ---------------------------------------------------------------------------
# Invariance report
# ---------------------------------------------------------------------------

def _descriptor_pair(img: GrayImage, config: PipelineConfig):
    norm = normalize_intensity(img, config.norm_mean, config.norm_std)
    fw = extract_fwlbp(norm, config.radii, config.r_min, config.r_max, config.regression_mode)
    lb = extract_lbp_baseline(norm, config.radii)
    return fw, lb


def invariance_report(img: GrayImage, config: PipelineConfig) -> list:
    """Chi-square distances between the base image's descriptors and the
    descriptors of its rescaled / rotated versions.

    Rotation rows extract from the centered disc-inscribed crop of both
    the base and the rotated image, so the fill region never contributes.
    """
    rows = []
    base_fw, base_lb = _descriptor_pair(img, config)
    for factor in SCALE_FACTORS:
        fw, lb = _descriptor_pair(resample(img, factor), config)
        rows.append({
            "transform": "scale",
            "param": float(factor),
            "chi2_fwlbp": chi_square_distance(base_fw, fw),
            "chi2_lbp": chi_square_distance(base_lb, lb),
        })
    crop_base_fw, crop_base_lb = _descriptor_pair(central_crop_for_rotation(img), config)
    for angle in ROTATION_ANGLES:
        cropped = central_crop_for_rotation(rotate(img, angle))
        fw, lb = _descriptor_pair(cropped, config)
        rows.append({
            "transform": "rotation",
            "param": float(angle),
            "chi2_fwlbp": chi_square_distance(crop_base_fw, fw),
            "chi2_lbp": chi_square_distance(crop_base_lb, lb),
        })
    return rows


def write_invariance_csv(rows, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["transform", "param", "chi2_fwlbp", "chi2_lbp"])
        for row in rows:
            writer.writerow([
                row["transform"],
                f"{row['param']:.17g}",
                f"{row['chi2_fwlbp']:.17g}",
                f"{row['chi2_lbp']:.17g}",
            ])


def write_descriptor_csv(path, entries, descriptor_length):
    """One row per image: path, label, then the descriptor values."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["path", "label"] + [f"v{i}" for i in range(descriptor_length)])
        for name, label, values in entries:
            writer.writerow([name, label] + [f"{v:.17g}" for v in values])


def read_descriptor_csv(path):
    entries = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        n = len(header) - 2
        for row in reader:
            values = np.array([float(v) for v in row[2:]], dtype=np.float64)
            if len(values) != n:
                raise InvalidParameter(f"row for {row[0]} has {len(values)} values, expected {n}")
            entries.append((row[0], row[1], values))
    return entries
