"""Square-root mapping and principal component analysis."""

import json

import numpy as np
import pytest

from fwlbp.errors import DomainError, InvalidParameter, ShapeMismatch
from fwlbp.features import (
    FeatureMatrix,
    pca_fit,
    pca_from_json,
    pca_inverse_transform,
    pca_to_json,
    pca_transform,
    sqrt_transform,
)


# ---------------------------------------------------------------------------
# sqrt mapping
# ---------------------------------------------------------------------------

def test_sqrt_elementwise():
    x = np.array([0.0, 0.25, 1.0, 4.0])
    assert np.array_equal(sqrt_transform(x), [0.0, 0.5, 1.0, 2.0])


def test_sqrt_maps_l1_simplex_to_unit_sphere(rng):
    """An L1-normalized histogram becomes a unit L2 vector."""
    h = rng.uniform(0, 1, size=64)
    h /= h.sum()
    assert np.linalg.norm(sqrt_transform(h)) == pytest.approx(1.0, abs=1e-12)


def test_sqrt_rejects_negative_input():
    with pytest.raises(DomainError):
        sqrt_transform(np.array([0.5, -1e-9]))


# ---------------------------------------------------------------------------
# PCA
# ---------------------------------------------------------------------------

def _training_matrix(rng, m=40, n=10):
    # anisotropic Gaussian cloud with a known covariance structure
    scales = np.geomspace(5.0, 0.1, n)
    return rng.standard_normal((m, n)) * scales


def test_pca_components_are_orthonormal(rng):
    x = _training_matrix(rng)
    model = pca_fit(FeatureMatrix(x), 6)
    gram = model.components.T @ model.components
    assert np.allclose(gram, np.eye(6), atol=1e-10)


def test_pca_eigenvalues_sorted_and_nonnegative(rng):
    model = pca_fit(FeatureMatrix(_training_matrix(rng)), 8)
    ev = model.eigenvalues
    assert np.all(ev >= -1e-12)
    assert np.all(np.diff(ev) <= 1e-12)


def test_pca_matches_numpy_eigendecomposition(rng):
    """Components diagonalize the sample covariance (divisor m-1)."""
    x = _training_matrix(rng, m=30, n=8)
    model = pca_fit(FeatureMatrix(x), 5)
    xc = x - x.mean(axis=0)
    cov = xc.T @ xc / (x.shape[0] - 1)
    for j in range(5):
        v = model.components[:, j]
        assert np.allclose(cov @ v, model.eigenvalues[j] * v, atol=1e-8)


def test_pca_full_rank_preserves_distances(rng):
    """With k = n the projection is an isometry of the centered data."""
    x = _training_matrix(rng, m=40, n=6)
    model = pca_fit(FeatureMatrix(x), 6)
    z = pca_transform(model, x)
    d_orig = np.linalg.norm(x[0] - x[1])
    d_proj = np.linalg.norm(z[0] - z[1])
    assert d_proj == pytest.approx(d_orig, abs=1e-9)
    back = pca_inverse_transform(model, z)
    assert np.allclose(back, x, atol=1e-9)


def test_pca_transform_of_mean_is_zero(rng):
    x = _training_matrix(rng)
    model = pca_fit(FeatureMatrix(x), 4)
    assert np.allclose(pca_transform(model, x.mean(axis=0)), 0.0, atol=1e-10)


def test_pca_gram_path_agrees_with_covariance_path(rng):
    """More features than samples triggers the Gram-matrix route; its
    projections must match a direct covariance eigendecomposition."""
    x = rng.standard_normal((8, 20))  # n > m
    model = pca_fit(FeatureMatrix(x), 5)
    xc = x - x.mean(axis=0)
    cov = xc.T @ xc / (x.shape[0] - 1)
    w, v = np.linalg.eigh(cov)
    order = np.argsort(w)[::-1][:5]
    assert np.allclose(model.eigenvalues, w[order], atol=1e-10)
    z_ours = np.abs(pca_transform(model, x))  # signs are convention-dependent
    z_ref = np.abs(xc @ v[:, order])
    assert np.allclose(z_ours, z_ref, atol=1e-8)


def test_pca_vector_and_matrix_transform_agree(rng):
    x = _training_matrix(rng)
    model = pca_fit(FeatureMatrix(x), 3)
    z = pca_transform(model, x)
    assert np.allclose(pca_transform(model, x[7]), z[7], atol=1e-12)


def test_pca_validation(rng):
    x = _training_matrix(rng, m=10, n=5)
    with pytest.raises(InvalidParameter):
        pca_fit(FeatureMatrix(x), 0)
    with pytest.raises(InvalidParameter):
        pca_fit(FeatureMatrix(x), 6)  # k > n
    with pytest.raises(InvalidParameter):
        pca_fit(FeatureMatrix(x[:1]), 1)  # m < 2
    model = pca_fit(FeatureMatrix(x), 3)
    with pytest.raises(ShapeMismatch):
        pca_transform(model, np.zeros(7))


def test_pca_json_round_trip(rng):
    x = _training_matrix(rng)
    model = pca_fit(FeatureMatrix(x), 4)
    clone = pca_from_json(pca_to_json(model))
    assert np.array_equal(clone.mean, model.mean)
    assert np.array_equal(clone.components, model.components)
    assert np.array_equal(clone.eigenvalues, model.eigenvalues)
    probe = rng.standard_normal(x.shape[1])
    # matmul summation order can differ with memory layout; allow ULP noise
    assert np.allclose(pca_transform(clone, probe), pca_transform(model, probe),
                       atol=1e-12)


def test_pca_json_is_valid_json(rng):
    model = pca_fit(FeatureMatrix(_training_matrix(rng)), 2)
    payload = json.loads(pca_to_json(model))
    assert payload["k"] == 2
