import math

import numpy as np
import numpy.testing as npt
import pytest

from pinet_refine.exception import ShapeMismatchError
from pinet_refine.nn import Param, linear, relu, sigmoid, softmax_rows


def test_linear_identity_and_bias(rng):
    x = rng.normal(size=(3, 4))
    W = Param("W", np.eye(4))
    b = Param("b", np.zeros(4))
    npt.assert_array_equal(linear(x, W, b), x)

    b = Param("b", np.arange(4.0))
    npt.assert_array_equal(linear(np.zeros((2, 4)), W, b), np.tile(np.arange(4.0), (2, 1)))


def test_linear_matches_triple_loop(rng):
    x = rng.normal(size=(3, 4))
    W = Param("W", rng.normal(size=(4, 5)))
    b = Param("b", rng.normal(size=5))
    out = linear(x, W, b)
    for i in range(3):
        for k in range(5):
            expected = b.value[k] + sum(x[i, j] * W.value[j, k] for j in range(4))
            assert out[i, k] == pytest.approx(expected, abs=1e-12)


def test_linear_shape_mismatch(rng):
    with pytest.raises(ShapeMismatchError):
        linear(rng.normal(size=(2, 3)), Param("W", np.zeros((4, 2))), Param("b", np.zeros(2)))


def test_softmax_rows():
    npt.assert_allclose(softmax_rows(np.full((2, 4), 3.0)), 0.25)
    npt.assert_allclose(softmax_rows(np.array([[0.0, math.log(3.0)]])), [[0.25, 0.75]], atol=1e-15)


def test_softmax_matches_direct_formula(rng):
    S = rng.normal(size=(4, 4))
    P = softmax_rows(S)
    expected = np.exp(S) / np.exp(S).sum(axis=1, keepdims=True)
    npt.assert_allclose(P, expected, atol=1e-12)
    npt.assert_allclose(P.sum(axis=1), 1.0, atol=1e-12)


def test_softmax_is_overflow_safe():
    P = softmax_rows(np.array([[1000.0, 0.0]]))
    assert np.all(np.isfinite(P))
    npt.assert_allclose(P, [[1.0, 0.0]], atol=1e-300)


def test_sigmoid_and_relu():
    npt.assert_allclose(sigmoid(np.array([0.0, 800.0, -800.0])), [0.5, 1.0, 0.0])
    npt.assert_array_equal(relu(np.array([-1.0, 0.0, 2.0])), [0.0, 0.0, 2.0])
