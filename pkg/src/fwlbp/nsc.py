"""Nearest subspace classifier: one principal subspace per class, fit by
SVD of the (uncentered) stacked class samples; prediction picks the class
with the smallest orthogonal-projection residual.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptyModel,
    InsufficientSamples,
    InvalidParameter,
    ShapeMismatch,
    UnknownClass,
)
from .features import FeatureMatrix

_RANK_TOL = 1e-10


@dataclass(frozen=True)
class SubspacePolicy:
    """fixed(s): keep s components; energy(f): keep the smallest prefix of
    singular values whose squared sum reaches fraction f."""

    kind: str  # "fixed" | "energy"
    value: float

    @staticmethod
    def fixed(s: int) -> "SubspacePolicy":
        if s < 1:
            raise InvalidParameter("subspace dimension must be >= 1")
        return SubspacePolicy("fixed", float(s))

    @staticmethod
    def energy(fraction: float) -> "SubspacePolicy":
        if not 0 < fraction <= 1:
            raise InvalidParameter("energy fraction must be in (0, 1]")
        return SubspacePolicy("energy", float(fraction))


DEFAULT_POLICY = SubspacePolicy.energy(0.95)


@dataclass(frozen=True)
class NscModel:
    classes: tuple[int, ...]
    bases: dict  # class label -> (feature_dim, s_c) orthonormal matrix
    policy: SubspacePolicy

    @property
    def feature_dim(self) -> int:
        first = next(iter(self.bases.values()))
        return first.shape[0]


def _subspace_dim(singular_values: np.ndarray, policy: SubspacePolicy) -> int:
    rank = int(np.sum(singular_values > _RANK_TOL * max(singular_values[0], 1.0)))
    rank = max(rank, 1)
    if policy.kind == "fixed":
        return min(int(policy.value), rank)
    energy = singular_values ** 2
    cumulative = np.cumsum(energy) / energy.sum()
    s = int(np.searchsorted(cumulative, policy.value - 1e-12) + 1)
    return min(s, rank)


def nsc_fit(train: FeatureMatrix, policy: SubspacePolicy = DEFAULT_POLICY) -> NscModel:
    """Per-class orthonormal basis of the leading left singular vectors."""
    if train.labels is None:
        raise InvalidParameter("training matrix needs labels")
    classes = tuple(sorted(int(c) for c in np.unique(train.labels)))
    bases = {}
    for c in classes:
        rows = train.data[train.labels == c]
        if rows.shape[0] < 2:
            raise InsufficientSamples(f"class {c} has {rows.shape[0]} samples; need >= 2")
        # columns of U span the class data; no mean-centering by design
        u, s, _ = np.linalg.svd(rows.T, full_matrices=False)
        dim = _subspace_dim(s, policy)
        basis = u[:, :dim].copy()
        for j in range(dim):
            pivot = np.argmax(np.abs(basis[:, j]))
            if basis[pivot, j] < 0:
                basis[:, j] = -basis[:, j]
        bases[c] = basis
    return NscModel(classes, bases, policy)


def nsc_residual(model: NscModel, y: np.ndarray, c: int) -> float:
    """||y - B_c (B_c^T y)||_2, the distance to the class subspace."""
    if c not in model.bases:
        raise UnknownClass(f"class {c} not in model")
    y = np.asarray(y, dtype=np.float64)
    basis = model.bases[c]
    if y.shape != (basis.shape[0],):
        raise ShapeMismatch(f"expected length {basis.shape[0]}, got {y.shape}")
    return float(np.linalg.norm(y - basis @ (basis.T @ y)))


def nsc_residuals(model: NscModel, y: np.ndarray) -> dict:
    if not model.classes:
        raise EmptyModel("model has no classes")
    return {c: nsc_residual(model, y, c) for c in model.classes}


def nsc_predict(model: NscModel, y: np.ndarray) -> int:
    """Class with the smallest residual; ties break toward the smaller label."""
    residuals = nsc_residuals(model, y)
    return min(model.classes, key=lambda c: (residuals[c], c))


def nsc_to_json(model: NscModel) -> str:
    return json.dumps(
        {
            "classes": list(model.classes),
            "policy": {"kind": model.policy.kind, "value": model.policy.value},
            "feature_dim": model.feature_dim,
            "bases": {str(c): model.bases[c].tolist() for c in model.classes},
        }
    )


def nsc_from_json(text: str) -> NscModel:
    obj = json.loads(text)
    policy = SubspacePolicy(obj["policy"]["kind"], obj["policy"]["value"])
    bases = {int(c): np.asarray(b, dtype=np.float64) for c, b in obj["bases"].items()}
    return NscModel(tuple(obj["classes"]), bases, policy)
