"""Procedural texture generators and the jittered classification corpus."""

import numpy as np
import pytest

from fwlbp.errors import InvalidParameter
from fwlbp.fractal import compute_fd_image
from fwlbp.image import normalize_intensity
from fwlbp.synth import (
    CLASS_SPECS,
    KINDS,
    default_corpus,
    make_class_sample,
    make_classification_corpus,
    synth_texture,
)


def test_generators_are_deterministic():
    for kind in KINDS:
        a = synth_texture(kind, None, 64, seed=9)
        b = synth_texture(kind, None, 64, seed=9)
        c = synth_texture(kind, None, 64, seed=10)
        assert np.array_equal(a.data, b.data)
        assert not np.array_equal(a.data, c.data)


def test_output_range_and_shape():
    for kind in KINDS:
        img = synth_texture(kind, None, 64, seed=1)
        assert img.shape == (64, 64)
        assert img.data.min() >= -1e-9 and img.data.max() <= 255.0 + 1e-9
        assert img.data.std() > 1.0  # not degenerate


def test_spectral_exponent_orders_roughness():
    """Lower power-law exponent = more high-frequency energy = higher FD."""
    rough = synth_texture("fractal_noise", {"beta": 2.2}, 128, 3)
    smooth = synth_texture("fractal_noise", {"beta": 2.8}, 128, 3)
    fd_rough = compute_fd_image(normalize_intensity(rough)).data.mean()
    fd_smooth = compute_fd_image(normalize_intensity(smooth)).data.mean()
    assert fd_rough > fd_smooth


def test_parameter_validation():
    with pytest.raises(InvalidParameter):
        synth_texture("plasma", None, 64, 0)
    with pytest.raises(InvalidParameter):
        synth_texture("sinusoid", None, 32, 0)  # below generator floor
    with pytest.raises(InvalidParameter):
        synth_texture("fractal_noise", {"beta": -1.0}, 64, 0)
    with pytest.raises(InvalidParameter):
        synth_texture("fractal_noise", {"aniso": 1.5}, 64, 0)
    with pytest.raises(InvalidParameter):
        synth_texture("checker", {"period": 1}, 64, 0)
    with pytest.raises(InvalidParameter):
        synth_texture("blob", {"count": 0}, 64, 0)


def test_default_corpus_layout(invariance_corpus):
    assert len(invariance_corpus) == 12
    names = [name for name, _ in invariance_corpus]
    assert len(set(names)) == 12
    for _, img in invariance_corpus:
        assert img.shape == (256, 256)


def test_class_sample_jitter_recording():
    img, record = make_class_sample(0, 0, 96, seed=5,
                                    scale_jitter=(0.7, 1.4),
                                    rotation_jitter=(0.0, 90.0))
    assert img.shape == (96, 96)
    assert record["class"] == CLASS_SPECS[0][0]
    assert 0.7 <= record["scale"] <= 1.4
    assert 0.0 <= record["rotation"] <= 90.0


def test_class_sample_no_jitter():
    img, record = make_class_sample(1, 3, 96, seed=5)
    assert img.shape == (96, 96)
    assert record["scale"] == 1.0 and record["rotation"] == 0.0


def test_class_sample_determinism():
    a, _ = make_class_sample(2, 4, 96, seed=5, scale_jitter=(0.7, 1.4))
    b, _ = make_class_sample(2, 4, 96, seed=5, scale_jitter=(0.7, 1.4))
    c, _ = make_class_sample(2, 5, 96, seed=5, scale_jitter=(0.7, 1.4))
    assert np.array_equal(a.data, b.data)
    assert not np.array_equal(a.data, c.data)


def test_class_sample_unknown_class():
    with pytest.raises(InvalidParameter):
        make_class_sample(len(CLASS_SPECS), 0, 96, seed=5)


def test_classification_corpus_layout():
    images, labels, class_names, records = make_classification_corpus(
        num_classes=3, per_class=4, size=96, seed=2)
    assert len(images) == 12 and len(labels) == 12 and len(records) == 12
    assert class_names == [CLASS_SPECS[c][0] for c in range(3)]
    assert labels == [0] * 4 + [1] * 4 + [2] * 4
    for img, rec in zip(images, records):
        assert img.shape == (96, 96)
        assert rec["class"] in class_names


def test_classification_corpus_validation():
    with pytest.raises(InvalidParameter):
        make_classification_corpus(num_classes=1)
    with pytest.raises(InvalidParameter):
        make_classification_corpus(num_classes=len(CLASS_SPECS) + 1)
