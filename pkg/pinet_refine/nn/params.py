from collections import OrderedDict
from typing import Iterator, Optional

import numpy as np

from pinet_refine.exception import ShapeMismatchError


class Param:
    """A trainable tensor with its gradient buffer and Adam moments (all one shape)."""

    __slots__ = ("name", "value", "grad", "adam_m", "adam_v")

    def __init__(self, name: str, value: np.ndarray):
        self.name = name
        self.value = np.ascontiguousarray(value, dtype=np.float64)
        self.grad = np.zeros_like(self.value)
        self.adam_m = np.zeros_like(self.value)
        self.adam_v = np.zeros_like(self.value)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.value.shape

    @property
    def size(self) -> int:
        return int(self.value.size)

    def zero_grad(self) -> None:
        self.grad.fill(0.0)

    def __repr__(self) -> str:
        return f"Param({self.name!r}, shape={self.shape})"


class ParameterStore:
    """Ordered name -> Param mapping; the order is the serialization order."""

    def __init__(self, params: Optional[list[Param]] = None):
        self._params: "OrderedDict[str, Param]" = OrderedDict()
        for param in params or []:
            self.add(param)

    def add(self, param: Param) -> Param:
        if param.name in self._params:
            raise ValueError(f"duplicate parameter {param.name!r}")
        self._params[param.name] = param
        return param

    def __getitem__(self, name: str) -> Param:
        return self._params[name]

    def __contains__(self, name: str) -> bool:
        return name in self._params

    def __iter__(self) -> Iterator[Param]:
        return iter(self._params.values())

    def __len__(self) -> int:
        return len(self._params)

    def names(self) -> list[str]:
        return list(self._params)

    def num_scalars(self) -> int:
        return sum(p.size for p in self)

    def zero_grad(self) -> None:
        for param in self:
            param.zero_grad()

    def scale_grad(self, factor: float) -> None:
        for param in self:
            param.grad *= factor

    def values(self) -> dict[str, np.ndarray]:
        return {p.name: p.value for p in self}

    def copy(self) -> "ParameterStore":
        """Deep copy of values and moments; gradients start at zero."""
        store = ParameterStore()
        for param in self:
            clone = Param(param.name, param.value.copy())
            clone.adam_m[...] = param.adam_m
            clone.adam_v[...] = param.adam_v
            store.add(clone)
        return store

    def load_values(self, values: dict[str, np.ndarray]) -> None:
        for param in self:
            value = np.asarray(values[param.name], dtype=np.float64)
            if value.shape != param.shape:
                raise ShapeMismatchError(
                    f"{param.name}: expected shape {param.shape}, got {value.shape}"
                )
            param.value[...] = value

    def equals(self, other: "ParameterStore") -> bool:
        """Bitwise equality of names, shapes and values."""
        if self.names() != other.names():
            return False
        return all(np.array_equal(a.value, b.value) for a, b in zip(self, other))


__all__ = [
    "Param",
    "ParameterStore",
]
