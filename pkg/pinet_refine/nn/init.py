from dataclasses import dataclass
from typing import Literal, Sequence, Union

import numpy as np

from .params import Param, ParameterStore

PRNG_ALGORITHM = "PCG64"


@dataclass(frozen=True)
class ParamSpec:
    name: str
    shape: tuple[int, ...]
    fan_in: int
    kind: Literal["weight", "bias"] = "weight"

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))


def make_rng(seed: Union[int, Sequence[int]]) -> np.random.Generator:
    """Generator over the recorded PRNG algorithm; `seed` may be an int or a tuple of ints."""
    return np.random.Generator(np.random.PCG64(seed))


def init_store(specs: Sequence[ParamSpec], seed: int) -> ParameterStore:
    """Weights ~ U[-1/sqrt(fan_in), 1/sqrt(fan_in)] drawn in ParamSpec order, biases zero."""
    rng = make_rng(seed)
    store = ParameterStore()
    for spec in specs:
        if spec.kind == "bias":
            value = np.zeros(spec.shape)
        else:
            bound = 1.0 / np.sqrt(spec.fan_in)
            value = rng.uniform(-bound, bound, size=spec.shape)
        store.add(Param(spec.name, value))
    return store


__all__ = [
    "PRNG_ALGORITHM",
    "ParamSpec",
    "make_rng",
    "init_store",
]
