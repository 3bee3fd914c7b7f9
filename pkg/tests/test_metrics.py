import numpy as np
import pytest
from hypothesis import given
from hypothesis.extra.numpy import arrays

from impulsegraph.errors import UndefinedImprovementError
from impulsegraph.image import DamageMask, Image
from impulsegraph.metrics import evaluate, image_distance, mask_scores, relative_improvement


def gray(values):
    return Image.from_array(np.array([values], dtype=np.uint8))


def test_gray_distance():
    assert image_distance(gray([0, 0]), gray([10, 30])) == 20.0


def test_colour_distance_is_channel_max():
    assert image_distance(Image.filled(1, 1, (0, 0, 0)), Image.filled(1, 1, (10, 20, 90))) == 90.0


@given(arrays(np.uint8, (5, 4, 3)), arrays(np.uint8, (5, 4, 3)))
def test_distance_symmetric(a, b):
    A, B = Image.from_array(a), Image.from_array(b)
    assert image_distance(A, A) == 0.0
    assert image_distance(A, B) == image_distance(B, A)


def test_shape_mismatch():
    with pytest.raises(ValueError):
        image_distance(gray([1, 2]), gray([1]))


def test_relative_improvement_cases():
    orig = gray([0, 0])
    noisy = gray([40, 0])
    assert relative_improvement(orig, noisy, orig) == 100.0
    assert relative_improvement(orig, noisy, noisy) == 0.0
    assert relative_improvement(orig, noisy, gray([10, 0])) == 75.0
    assert relative_improvement(orig, noisy, gray([80, 0])) < 0


def test_improvement_undefined_without_noise():
    with pytest.raises(UndefinedImprovementError):
        relative_improvement(gray([3]), gray([3]), gray([4]))


def _mask(coords, n=4):
    flags = np.zeros((n, n), dtype=bool)
    for x, y in coords:
        flags[y, x] = True
    return DamageMask(n, n, flags)


def test_mask_scores():
    truth = _mask([(0, 0), (1, 1), (2, 2), (3, 3)])
    assert mask_scores(truth, truth) == (1.0, 1.0)
    assert mask_scores(truth, _mask([])) == (1.0, 0.0)
    extra = _mask([(0, 0), (1, 1), (2, 2), (3, 3), (0, 3)])
    assert mask_scores(truth, extra) == (0.8, 1.0)
    assert mask_scores(_mask([]), _mask([])) == (1.0, 1.0)


def test_evaluate_optional_scores():
    orig, noisy = gray([0, 0]), gray([40, 0])
    r = evaluate(orig, noisy, orig)
    assert r.delta_improvement_percent == 100.0
    assert r.precision is None and r.recall is None
    m = DamageMask(2, 1, np.array([[True, False]]))
    r = evaluate(orig, noisy, orig, m, m)
    assert (r.precision, r.recall) == (1.0, 1.0)
    assert r.d_orig_noisy == 20.0
