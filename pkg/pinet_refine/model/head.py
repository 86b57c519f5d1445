from dataclasses import dataclass

import numpy as np

from pinet_refine.nn import Param, ParameterStore, linear, linear_backward, relu, relu_backward


@dataclass(frozen=True)
class MlpHead:
    """Linear layers shared across rows, rectified between layers (not after the last)."""

    layers: tuple[tuple[Param, Param], ...]

    @classmethod
    def from_store(cls, store: ParameterStore, depth: int, prefix: str = "head") -> "MlpHead":
        return cls(
            layers=tuple((store[f"{prefix}.{k}.W"], store[f"{prefix}.{k}.b"]) for k in range(depth))
        )


def head_forward(U: np.ndarray, params: MlpHead):
    cache = []
    x = U
    last = len(params.layers) - 1
    for k, (W, b) in enumerate(params.layers):
        pre = linear(x, W, b)
        cache.append((x, pre))
        x = relu(pre) if k < last else pre
    return x, cache


def head_backward(dY: np.ndarray, cache, params: MlpHead) -> np.ndarray:
    g = dY
    last = len(params.layers) - 1
    for k in range(last, -1, -1):
        W, b = params.layers[k]
        x, pre = cache[k]
        if k < last:
            g = relu_backward(g, pre)
        g = linear_backward(g, x, W, b)
    return g


def head(U: np.ndarray, params: MlpHead) -> np.ndarray:
    out, _ = head_forward(U, params)
    return out


def head_kinks(cache) -> np.ndarray:
    """On/off pattern of every rectifier, for gradient checking."""
    return np.concatenate([(pre > 0).ravel() for _, pre in cache[:-1]]) if len(cache) > 1 else np.zeros(0, bool)


__all__ = [
    "MlpHead",
    "head_forward",
    "head_backward",
    "head",
    "head_kinks",
]
