"""
Forward/backward pairs for the dense pieces of the network. Backward functions
accumulate into `Param.grad` and return the gradient w.r.t. their input.
"""

import numpy as np

from pinet_refine.exception import ShapeMismatchError
from .params import Param


def _as_2d(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    return x[None, :] if x.ndim == 1 else x


def linear(x: np.ndarray, W: Param, b: Param) -> np.ndarray:
    """Row-wise xW + b for x of shape (N, D), W (D, K), b (1, K)."""
    x = _as_2d(x)
    if x.shape[1] != W.shape[0] or b.value.shape[-1] != W.shape[1]:
        raise ShapeMismatchError(
            f"linear: x {x.shape}, W {W.shape}, b {b.shape} do not agree"
        )
    return x @ W.value + b.value.reshape(1, -1)


def linear_backward(g: np.ndarray, x: np.ndarray, W: Param, b: Param) -> np.ndarray:
    x = _as_2d(x)
    g = _as_2d(g)
    W.grad += x.T @ g
    b.grad += g.sum(axis=0).reshape(b.shape)
    return g @ W.value.T


def relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


def relu_backward(g: np.ndarray, x: np.ndarray) -> np.ndarray:
    return g * (x > 0.0)


def sigmoid(x: np.ndarray) -> np.ndarray:
    # tanh form never overflows
    return 0.5 * (1.0 + np.tanh(0.5 * np.asarray(x, dtype=np.float64)))


def softmax_rows(W: np.ndarray) -> np.ndarray:
    """Row-wise softmax with max subtraction."""
    W = _as_2d(W)
    shifted = W - W.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def softmax_rows_backward(g: np.ndarray, P: np.ndarray) -> np.ndarray:
    """Gradient w.r.t. the scores given the softmax output `P`."""
    return P * (g - np.sum(g * P, axis=1, keepdims=True))


__all__ = [
    "linear",
    "linear_backward",
    "relu",
    "relu_backward",
    "sigmoid",
    "softmax_rows",
    "softmax_rows_backward",
]
