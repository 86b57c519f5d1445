"""
Interaction ordering: the sequence in which a scene's poses are fed to the
recurrent encoder for one person-of-interest.
"""

from typing import Literal, Optional

import numpy as np
from pydantic import field_validator

from pinet_refine.base import FrozenModel
from .joints import DEFAULT_ROOT_INDEX
from .pose import Scene, root_of


OrderStrategy = Literal["intuitive", "reverse", "random"]


class Ordering(FrozenModel):
    perm: tuple[int, ...]

    @field_validator("perm")
    @classmethod
    def _bijective(cls, perm: tuple[int, ...]) -> tuple[int, ...]:
        if sorted(perm) != list(range(len(perm))):
            raise ValueError(f"{perm} is not a permutation of 0..{len(perm) - 1}")
        return perm

    @property
    def person_of_interest(self) -> int:
        return self.perm[0]

    def __len__(self) -> int:
        return len(self.perm)

    def inverse(self) -> tuple[int, ...]:
        """position of each scene index inside the sequence"""
        inv = [0] * len(self.perm)
        for position, index in enumerate(self.perm):
            inv[index] = position
        return tuple(inv)


def root_distances(scene: Scene, n: int, root_index: int = DEFAULT_ROOT_INDEX) -> np.ndarray:
    """Euclidean root-to-root distance from person `n` to every person of the scene."""
    scene.check_index(n)
    anchor = root_of(scene.persons[n].pose, root_index)
    roots = np.stack([root_of(p.pose, root_index) for p in scene.persons])
    return np.linalg.norm(roots - anchor, axis=1)


def order_for(
    scene: Scene,
    n: int,
    strategy: OrderStrategy = "intuitive",
    root_index: int = DEFAULT_ROOT_INDEX,
    order_seed: int = 0,
    rng: Optional[np.random.Generator] = None,
) -> Ordering:
    """
    Ordering for person-of-interest `n`.

    Args:
        scene: (Scene) the scene to order.
        n: (int) index of the person-of-interest, always placed first.
        strategy: (OrderStrategy) `intuitive` sorts interactees near to far by
            root distance, `reverse` far to near, `random` shuffles them.
        root_index: (int) joint used as the person's root.
        order_seed: (int) seed of the `random` strategy when no `rng` is given.
        rng: (Optional[np.random.Generator]) explicit generator for `random`.

    Returns:
        Ordering: perm[0] == n, every index exactly once. Ties in distance are
        broken by ascending person id.
    """
    dist = root_distances(scene, n, root_index)
    others = [m for m in range(scene.num_persons) if m != n]
    ids = scene.ids

    if strategy == "random":
        # shuffle a relabel-invariant base order so the result depends on ids only
        others.sort(key=lambda m: ids[m])
        if rng is None:
            rng = np.random.default_rng([order_seed, ids[n], *sorted(ids[m] for m in others)])
        others = [others[k] for k in rng.permutation(len(others))]
    elif strategy == "reverse":
        others.sort(key=lambda m: (-dist[m], ids[m], m))
    else:
        others.sort(key=lambda m: (dist[m], ids[m], m))

    return Ordering(perm=(n, *others))


__all__ = [
    "OrderStrategy",
    "Ordering",
    "root_distances",
    "order_for",
]
