"""Pre-classification transforms: square-root re-weighting of histogram
features and PCA with explicit eigendecomposition of the covariance.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InvalidParameter, ShapeMismatch


@dataclass
class FeatureMatrix:
    """Samples in rows, features in columns, with optional labels/ids."""

    data: np.ndarray
    labels: np.ndarray | None = None
    ids: list[str] | None = None

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.float64)
        if self.data.ndim != 2:
            raise ShapeMismatch("feature matrix must be 2-D")
        if not np.all(np.isfinite(self.data)):
            raise InvalidParameter("feature matrix contains non-finite values")
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=np.int64)
            if len(self.labels) != self.data.shape[0]:
                raise ShapeMismatch("labels length must match the row count")

    @property
    def num_samples(self) -> int:
        return self.data.shape[0]

    @property
    def num_features(self) -> int:
        return self.data.shape[1]


def sqrt_transform(x: np.ndarray) -> np.ndarray:
    """Elementwise square root; maps an L1-normalized histogram onto the
    unit L2 sphere and damps dominant bins."""
    x = np.asarray(x, dtype=np.float64)
    if np.any(x < 0):
        raise DomainError("sqrt transform requires non-negative input")
    return np.sqrt(x)


@dataclass(frozen=True)
class PcaModel:
    mean: np.ndarray
    components: np.ndarray  # (n_features, k), orthonormal columns
    eigenvalues: np.ndarray  # length k, descending

    @property
    def num_features(self) -> int:
        return len(self.mean)

    @property
    def num_components(self) -> int:
        return self.components.shape[1]


def pca_fit(train: FeatureMatrix, k: int) -> PcaModel:
    """Top-k eigenpairs of the (samples-1)-normalized covariance.

    Uses the m x m Gram matrix when samples < features, otherwise the
    n x n covariance directly; both give identical subspaces.
    """
    m, n = train.data.shape
    if m < 2:
        raise InvalidParameter("need at least 2 samples")
    if not 1 <= k <= min(m - 1, n):
        raise InvalidParameter(f"k={k} outside [1, {min(m - 1, n)}]")
    mean = train.data.mean(axis=0)
    centered = train.data - mean

    if n <= m:
        cov = centered.T @ centered / (m - 1)
        eigvals, eigvecs = np.linalg.eigh(cov)
        order = np.argsort(eigvals)[::-1][:k]
        values = eigvals[order]
        vectors = eigvecs[:, order]
    else:
        gram = centered @ centered.T / (m - 1)
        eigvals, eigvecs = np.linalg.eigh(gram)
        order = np.argsort(eigvals)[::-1][:k]
        values = eigvals[order]
        vectors = centered.T @ eigvecs[:, order]
        norms = np.linalg.norm(vectors, axis=0)
        norms[norms == 0] = 1.0
        vectors = vectors / norms

    # deterministic sign: largest-magnitude entry of each component positive
    for j in range(vectors.shape[1]):
        pivot = np.argmax(np.abs(vectors[:, j]))
        if vectors[pivot, j] < 0:
            vectors[:, j] = -vectors[:, j]
    return PcaModel(mean.copy(), vectors, values.copy())


def pca_transform(model: PcaModel, x: np.ndarray) -> np.ndarray:
    """Project onto the principal components: components^T (x - mean).

    Accepts a single vector or a matrix of row vectors.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != model.num_features:
        raise ShapeMismatch(f"expected {model.num_features} features, got {x.shape[-1]}")
    return (x - model.mean) @ model.components


def pca_inverse_transform(model: PcaModel, z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.float64)
    if z.shape[-1] != model.num_components:
        raise ShapeMismatch(f"expected {model.num_components} coordinates, got {z.shape[-1]}")
    return z @ model.components.T + model.mean


def pca_to_json(model: PcaModel) -> str:
    return json.dumps(
        {
            "n": model.num_features,
            "k": model.num_components,
            "mean": model.mean.tolist(),
            "components": model.components.tolist(),  # row-major (n rows of k)
            "eigenvalues": model.eigenvalues.tolist(),
        }
    )


def pca_from_json(text: str) -> PcaModel:
    obj = json.loads(text)
    mean = np.asarray(obj["mean"], dtype=np.float64)
    components = np.asarray(obj["components"], dtype=np.float64)
    eigenvalues = np.asarray(obj["eigenvalues"], dtype=np.float64)
    if components.shape != (obj["n"], obj["k"]):
        raise ShapeMismatch("component matrix shape does not match the declared dims")
    return PcaModel(mean, components, eigenvalues)
