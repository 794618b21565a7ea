"""Acceptance suite: eleven behavioral criteria for the full pipeline.

Each test prints a single pass/fail line (bypassing pytest's capture so the
lines always appear in the terminal) and then asserts the same condition.
"""

import sys
import time

import numpy as np
import pytest

from fwlbp.config import PipelineConfig
from fwlbp.descriptor import (
    chi_square_distance,
    extract_fwlbp,
    extract_lbp_baseline,
    fractal_weighted_histogram,
)
from fwlbp.evaluate import cross_validate_features, dataset_descriptors, noisy_image_descriptor
from fwlbp.features import FeatureMatrix, pca_fit, pca_inverse_transform, pca_transform
from fwlbp.fractal import FdImage, compute_fd_image
from fwlbp.image import GrayImage, central_crop_for_rotation, normalize_intensity, resample, rotate
from fwlbp.lbp import lbp_image
from fwlbp.nsc import SubspacePolicy, nsc_fit, nsc_predict

from test_descriptor import _brute_force_weighted_histogram
from test_lbp import _brute_force_codes


def _report(capsys, criterion: int, passed: bool, detail: str):
    line = f"criterion {criterion:2d}: {'PASS' if passed else 'FAIL'} - {detail}"
    with capsys.disabled():
        print(line, flush=True)
    assert passed, line


# ---------------------------------------------------------------------------
# 1. Constant-image fractal dimension
# ---------------------------------------------------------------------------

def test_criterion_01_constant_image_fd(capsys):
    start = time.perf_counter()
    fd = compute_fd_image(GrayImage(np.full((128, 128), 128.0)))
    elapsed = time.perf_counter() - start
    err = float(np.abs(fd.data - 2.0).max())
    ok = err < 1e-9 and elapsed < 1.0
    _report(capsys, 1, ok, f"constant 128x128 FD max|err| {err:.2e}, {elapsed:.2f} s")


# ---------------------------------------------------------------------------
# 2. Mean FD stability under resampling
# ---------------------------------------------------------------------------

def test_criterion_02_fd_resampling_stability(capsys, invariance_corpus):
    start = time.perf_counter()
    hits = 0
    total = 0
    for _, img in invariance_corpus:
        norm = normalize_intensity(img)
        base = compute_fd_image(norm).data.mean()
        for factor in (0.5, 2.0):
            other = compute_fd_image(resample(norm, factor)).data.mean()
            total += 1
            if abs(base - other) < 0.1:
                hits += 1
    elapsed = time.perf_counter() - start
    ok = hits >= int(np.ceil(0.9 * total)) and elapsed < 30.0
    _report(capsys, 2, ok, f"mean-FD stable under resampling in {hits}/{total} cases, {elapsed:.1f} s")


# ---------------------------------------------------------------------------
# 3. LBP brute-force oracle
# ---------------------------------------------------------------------------

def test_criterion_03_lbp_oracle(capsys):
    rng = np.random.default_rng(100)
    mismatches = 0
    for _ in range(50):
        data = rng.uniform(0, 255, size=(16, 16))
        for radius in (1, 2, 3):
            lbp = lbp_image(GrayImage(data), radius, 8)
            exp_codes, exp_valid = _brute_force_codes(data, radius, 8)
            if not (np.array_equal(lbp.valid, exp_valid)
                    and np.array_equal(lbp.codes[lbp.valid], exp_codes[exp_valid])):
                mismatches += 1
    ok = mismatches == 0
    _report(capsys, 3, ok, f"LBP matches per-pixel oracle on 50 images x 3 radii "
                   f"({mismatches} mismatches)")


# ---------------------------------------------------------------------------
# 4. Weighted-histogram indexing oracle
# ---------------------------------------------------------------------------

def test_criterion_04_histogram_oracle(capsys):
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(20):
        data = rng.uniform(0, 255, size=(8, 8))
        fd = FdImage(rng.uniform(1.0, 3.0, size=(8, 8)))
        lbp = lbp_image(GrayImage(data), 1, 8)
        got = fractal_weighted_histogram(lbp, fd).bins
        expected = _brute_force_weighted_histogram(lbp, fd)
        worst = max(worst, float(np.abs(got - expected).max()))
    ok = worst < 1e-12
    _report(capsys, 4, ok, f"weighted histogram matches double-loop oracle, max|err| {worst:.2e}")


# ---------------------------------------------------------------------------
# 5. Scale invariance: fractal weighting beats plain counts
# ---------------------------------------------------------------------------

def test_criterion_05_scale_invariance_vs_baseline(capsys, invariance_corpus):
    start = time.perf_counter()
    wins = 0
    total = 0
    for _, img in invariance_corpus:
        norm = normalize_intensity(img)
        base_fw = extract_fwlbp(norm)
        base_lb = extract_lbp_baseline(norm)
        for factor in (0.6, 0.8, 1.25, 1.6):
            scaled = resample(norm, factor)
            d_fw = chi_square_distance(base_fw, extract_fwlbp(scaled))
            d_lb = chi_square_distance(base_lb, extract_lbp_baseline(scaled))
            total += 1
            if d_fw < d_lb:
                wins += 1
    elapsed = time.perf_counter() - start
    ok = wins >= int(np.ceil(0.9 * total)) and elapsed < 120.0
    _report(capsys, 5, ok, f"fractal weighting wins {wins}/{total} (texture, scale) pairs, "
                   f"{elapsed:.1f} s")


# ---------------------------------------------------------------------------
# 6. Rotation stability
# ---------------------------------------------------------------------------

def test_criterion_06_rotation_stability(capsys, invariance_corpus):
    hits = 0
    total = 0
    for _, img in invariance_corpus:
        norm = normalize_intensity(img)
        base = extract_fwlbp(central_crop_for_rotation(norm))
        for angle in (5.0, 15.0, 45.0, 90.0):
            rotated = extract_fwlbp(central_crop_for_rotation(rotate(norm, angle)))
            total += 1
            if chi_square_distance(base, rotated) < 0.2:
                hits += 1
    ok = hits >= int(np.ceil(0.9 * total))
    _report(capsys, 6, ok, f"rotated-descriptor chi2 < 0.2 in {hits}/{total} cases")


# ---------------------------------------------------------------------------
# 7. End-to-end classification
# ---------------------------------------------------------------------------

def test_criterion_07_classification_accuracy(capsys, class_features, default_config):
    features, extract_seconds = class_features
    start = time.perf_counter()
    report = cross_validate_features(features, default_config, num_classes=4)
    elapsed = extract_seconds + (time.perf_counter() - start)
    ok = report.mean_accuracy >= 0.95 and elapsed < 300.0
    _report(capsys, 7, ok, f"4-class 10-fold CV accuracy {100 * report.mean_accuracy:.1f}%, "
                   f"{elapsed:.1f} s")


# ---------------------------------------------------------------------------
# 8. Noise robustness trend
# ---------------------------------------------------------------------------

def test_criterion_08_noise_robustness(capsys, class_dataset, class_features, default_config):
    clean_features, _ = class_features
    config = default_config
    clean = cross_validate_features(clean_features, config, num_classes=4).mean_accuracy
    accuracies = []
    for snr in (100.0, 30.0, 15.0, 10.0, 5.0):
        noisy_rows = np.stack([
            noisy_image_descriptor(class_dataset.image(i), config, snr,
                                   config.seed + 1000 + i)
            for i in range(len(class_dataset))
        ])
        noisy = FeatureMatrix(noisy_rows, labels=class_dataset.labels)
        report = cross_validate_features(clean_features, config, num_classes=4,
                                         test_features=noisy)
        accuracies.append(report.mean_accuracy)
    close_at_30 = abs(accuracies[1] - clean) <= 0.02 + 1e-12
    monotone = all(b <= a + 0.03 + 1e-12 for a, b in zip(accuracies, accuracies[1:]))
    ok = close_at_30 and monotone
    _report(capsys, 8, ok, f"noiseless {clean:.3f}; accuracy over SNR "
                   f"{{100,30,15,10,5}} dB = {[round(a, 3) for a in accuracies]}")


# ---------------------------------------------------------------------------
# 9. Scale-range sweep
# ---------------------------------------------------------------------------

def test_criterion_09_rmax_sweep(capsys, class_dataset, class_features, default_config):
    clean_features, _ = class_features
    accuracies = {}
    for rmax in (3, 4, 5, 6, 7):
        cfg = PipelineConfig(r_max=rmax)
        if rmax == default_config.r_max:
            features = clean_features
        else:
            features = dataset_descriptors(class_dataset, cfg)
        accuracies[rmax] = cross_validate_features(features, cfg,
                                                   num_classes=4).mean_accuracy
    best = max(accuracies.values())
    ok = best <= max(accuracies[6], accuracies[7]) + 1e-12
    _report(capsys, 9, ok, "CV accuracy by r_max " +
            str({r: round(a, 3) for r, a in accuracies.items()}) +
            "; best attained at r_max in {6,7}")


# ---------------------------------------------------------------------------
# 10. Complexity scaling
# ---------------------------------------------------------------------------

def test_criterion_10_complexity_scaling(capsys):
    rng = np.random.default_rng(5)
    small = GrayImage(rng.uniform(0, 255, size=(128, 128)))
    large = GrayImage(rng.uniform(0, 255, size=(256, 256)))
    extract_fwlbp(small)  # warm-up
    ratios = []
    for _ in range(20):
        t0 = time.perf_counter()
        extract_fwlbp(small)
        t1 = time.perf_counter()
        extract_fwlbp(large)
        t2 = time.perf_counter()
        ratios.append((t2 - t1) / (t1 - t0))
    median = float(np.median(ratios))
    ok = 2.0 <= median <= 8.0
    _report(capsys, 10, ok, f"median T(256^2)/T(128^2) = {median:.2f} over 20 trials")


# ---------------------------------------------------------------------------
# 11. Numerical invariant suites
# ---------------------------------------------------------------------------

def test_criterion_11_numerical_invariants(capsys):
    rng = np.random.default_rng(6)
    checks = []

    # PCA: orthonormal components, sorted spectrum, exact full-rank round-trip
    x = rng.standard_normal((30, 8)) * np.geomspace(4.0, 0.2, 8)
    pca = pca_fit(FeatureMatrix(x), 8)
    checks.append(np.allclose(pca.components.T @ pca.components, np.eye(8), atol=1e-10))
    checks.append(bool(np.all(np.diff(pca.eigenvalues) <= 1e-12)))
    z = pca_transform(pca, x)
    checks.append(np.allclose(pca_inverse_transform(pca, z), x, atol=1e-9))

    # NSC: projector idempotence and argmin invariance under probe scaling
    y = np.repeat([0, 1], 10)
    model = nsc_fit(FeatureMatrix(rng.standard_normal((20, 6)), labels=y),
                    SubspacePolicy.energy(0.95))
    basis = model.bases[0]
    probe = rng.standard_normal(6)
    once = basis @ (basis.T @ probe)
    checks.append(np.allclose(once, basis @ (basis.T @ once), atol=1e-12))
    checks.append(nsc_predict(model, probe) == nsc_predict(model, 5.0 * probe))

    # chi-square: non-negative, symmetric, zero iff identical (normalized inputs)
    a = rng.uniform(0, 1, 32)
    a /= a.sum()
    b = rng.uniform(0, 1, 32)
    b /= b.sum()
    checks.append(chi_square_distance(a, b) > 0)
    checks.append(abs(chi_square_distance(a, b) - chi_square_distance(b, a)) < 1e-15)
    checks.append(chi_square_distance(a, a) == 0.0)

    ok = all(checks)
    _report(capsys, 11, ok, f"PCA/NSC/chi-square invariant checks {sum(checks)}/{len(checks)} hold")
