"""Shared fixtures.  The synthetic corpora are expensive enough that they
are built once per session and shared across test modules."""

import time

import numpy as np
import pytest

from fwlbp.config import PipelineConfig
from fwlbp.evaluate import Dataset, dataset_descriptors
from fwlbp.synth import default_corpus, make_classification_corpus


@pytest.fixture(scope="session")
def invariance_corpus():
    """12 named scale-free textures at 256 px (used by acceptance 2/5/6)."""
    return default_corpus(size=256, seed=7)


@pytest.fixture(scope="session")
def class_corpus():
    """4-class jittered corpus at 192 px (used by acceptance 7/8/9)."""
    images, labels, class_names, records = make_classification_corpus(
        num_classes=4, per_class=20, size=192, seed=11,
        scale_jitter=(0.7, 1.4), rotation_jitter=(0.0, 90.0),
    )
    return images, labels, class_names, records


@pytest.fixture(scope="session")
def class_dataset(class_corpus):
    images, labels, class_names, _ = class_corpus
    return Dataset(list(zip(images, labels)), class_names)


@pytest.fixture(scope="session")
def default_config():
    return PipelineConfig()


@pytest.fixture(scope="session")
def class_features(class_dataset, default_config):
    """Clean descriptors of the classification corpus, computed once.

    Returns (features, extraction_seconds) so runtime-budgeted tests can
    charge themselves for the shared extraction cost.
    """
    start = time.perf_counter()
    features = dataset_descriptors(class_dataset, default_config)
    return features, time.perf_counter() - start


@pytest.fixture()
def rng():
    return np.random.default_rng(42)
