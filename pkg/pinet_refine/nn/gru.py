"""
Gated recurrent units with hand-derived backpropagation through time.

Gate convention (gates stacked as [z, r, h] along the last axis):

    z  = sigmoid(x W_z + h_prev U_z + b_z)
    r  = sigmoid(x W_r + h_prev U_r + b_r)
    h~ = tanh(x W_h + (r * h_prev) U_h + b_h)
    h  = (1 - z) * h_prev + z * h~
"""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from pinet_refine.exception import EmptyInputError, ShapeMismatchError
from .layers import sigmoid
from .params import Param, ParameterStore


@dataclass(frozen=True)
class GruDirection:
    """One direction of one layer: W (D_in, 3H), U (H, 3H), b (3H,)."""

    W: Param
    U: Param
    b: Param

    @property
    def input_size(self) -> int:
        return self.W.shape[0]

    @property
    def hidden_size(self) -> int:
        return self.U.shape[0]

    @classmethod
    def from_store(cls, store: ParameterStore, prefix: str) -> "GruDirection":
        return cls(W=store[f"{prefix}.W"], U=store[f"{prefix}.U"], b=store[f"{prefix}.b"])


@dataclass(frozen=True)
class GruLayerParams:
    fwd: GruDirection
    bwd: Optional[GruDirection] = None

    @property
    def bidirectional(self) -> bool:
        return self.bwd is not None

    @property
    def output_size(self) -> int:
        return self.fwd.hidden_size * (2 if self.bidirectional else 1)


def _step(ax: np.ndarray, h_prev: np.ndarray, U: np.ndarray, H: int):
    hu = h_prev @ U[:, : 2 * H]
    z = sigmoid(ax[:H] + hu[:H])
    r = sigmoid(ax[H : 2 * H] + hu[H:])
    rh = r * h_prev
    hh = np.tanh(ax[2 * H :] + rh @ U[:, 2 * H :])
    h = (1.0 - z) * h_prev + z * hh
    return h, (h_prev, z, r, rh, hh)


def _step_backward(dh: np.ndarray, cache, U: np.ndarray, dU: np.ndarray, H: int):
    h_prev, z, r, rh, hh = cache
    dz = dh * (hh - h_prev)
    dh_prev = dh * (1.0 - z)
    dah = dh * z * (1.0 - hh * hh)
    dU[:, 2 * H :] += np.outer(rh, dah)
    drh = U[:, 2 * H :] @ dah
    dh_prev += drh * r
    dazr = np.concatenate([dz * z * (1.0 - z), drh * h_prev * r * (1.0 - r)])
    dU[:, : 2 * H] += np.outer(h_prev, dazr)
    dh_prev += U[:, : 2 * H] @ dazr
    return np.concatenate([dazr, dah]), dh_prev


def _check_cell_shapes(x: np.ndarray, h_prev: np.ndarray, params: GruDirection) -> None:
    if x.shape != (params.input_size,) or h_prev.shape != (params.hidden_size,):
        raise ShapeMismatchError(
            f"gru_cell: x {x.shape}, h_prev {h_prev.shape} for "
            f"D_in={params.input_size}, H={params.hidden_size}"
        )


def gru_cell(x: np.ndarray, h_prev: np.ndarray, params: GruDirection) -> np.ndarray:
    """Single GRU step."""
    x = np.asarray(x, dtype=np.float64)
    h_prev = np.asarray(h_prev, dtype=np.float64)
    _check_cell_shapes(x, h_prev, params)
    ax = x @ params.W.value + params.b.value
    h, _ = _step(ax, h_prev, params.U.value, params.hidden_size)
    return h


def gru_cell_backward(
    dh: np.ndarray, x: np.ndarray, h_prev: np.ndarray, params: GruDirection
) -> tuple[np.ndarray, np.ndarray]:
    """Accumulates parameter gradients of one step; returns (dx, dh_prev)."""
    x = np.asarray(x, dtype=np.float64)
    h_prev = np.asarray(h_prev, dtype=np.float64)
    _check_cell_shapes(x, h_prev, params)
    H = params.hidden_size
    ax = x @ params.W.value + params.b.value
    _, cache = _step(ax, h_prev, params.U.value, H)
    dax, dh_prev = _step_backward(dh, cache, params.U.value, params.U.grad, H)
    params.W.grad += np.outer(x, dax)
    params.b.grad += dax
    return params.W.value @ dax, dh_prev


def _run_direction(X: np.ndarray, params: GruDirection, reverse: bool):
    N = X.shape[0]
    H = params.hidden_size
    AX = X @ params.W.value + params.b.value
    out = np.empty((N, H))
    h = np.zeros(H)
    caches = []
    steps = range(N - 1, -1, -1) if reverse else range(N)
    for t in steps:
        h, cache = _step(AX[t], h, params.U.value, H)
        out[t] = h
        caches.append(cache)
    return out, (X, list(steps), caches)


def _run_direction_backward(dOut: np.ndarray, cache, params: GruDirection) -> np.ndarray:
    X, steps, caches = cache
    H = params.hidden_size
    dAX = np.zeros((X.shape[0], 3 * H))
    dh = np.zeros(H)
    for t, step_cache in zip(reversed(steps), reversed(caches)):
        dax, dh = _step_backward(dOut[t] + dh, step_cache, params.U.value, params.U.grad, H)
        dAX[t] = dax
    params.W.grad += X.T @ dAX
    params.b.grad += dAX.sum(axis=0)
    return dAX @ params.W.value.T


def bi_gru_stack_forward(seq: Sequence[np.ndarray] | np.ndarray, layers: Sequence[GruLayerParams]):
    """Runs the stack and returns (output (N, E), cache for the backward pass)."""
    X = np.asarray(seq, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise EmptyInputError("bi_gru_stack needs a non-empty sequence of vectors")
    caches = []
    for layer in layers:
        if X.shape[1] != layer.fwd.input_size:
            raise ShapeMismatchError(
                f"layer expects inputs of size {layer.fwd.input_size}, got {X.shape[1]}"
            )
        out_f, cache_f = _run_direction(X, layer.fwd, reverse=False)
        if layer.bwd is not None:
            out_b, cache_b = _run_direction(X, layer.bwd, reverse=True)
            X = np.concatenate([out_f, out_b], axis=1)
        else:
            cache_b = None
            X = out_f
        caches.append((cache_f, cache_b))
    return X, caches


def bi_gru_stack_backward(dOut: np.ndarray, caches, layers: Sequence[GruLayerParams]) -> np.ndarray:
    """Backpropagates through every layer; returns the gradient w.r.t. the input sequence."""
    dX = dOut
    for layer, (cache_f, cache_b) in zip(reversed(layers), reversed(caches)):
        H = layer.fwd.hidden_size
        dX_prev = _run_direction_backward(dX[:, :H], cache_f, layer.fwd)
        if layer.bwd is not None:
            dX_prev = dX_prev + _run_direction_backward(dX[:, H:], cache_b, layer.bwd)
        dX = dX_prev
    return dX


def bi_gru_stack(seq: Sequence[np.ndarray] | np.ndarray, layers: Sequence[GruLayerParams]) -> np.ndarray:
    """
    Stacked (bi)directional GRU over an exact-length sequence.

    Layer 1 reads the input forward and backward from zero states; each later
    layer reads the per-step [forward; backward] concatenation of the layer
    below. Returns the last layer's per-step outputs, shape (N, E).
    """
    out, _ = bi_gru_stack_forward(seq, layers)
    return out


__all__ = [
    "GruDirection",
    "GruLayerParams",
    "gru_cell",
    "gru_cell_backward",
    "bi_gru_stack",
    "bi_gru_stack_forward",
    "bi_gru_stack_backward",
]
