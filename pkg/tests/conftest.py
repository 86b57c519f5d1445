import numpy as np
import pytest

from pinet_refine.model import ModelConfig
from pinet_refine.nn import make_rng
from pinet_refine.skeleton import NUM_JOINTS, Person, Pose, Scene


def random_scene(
    rng: np.random.Generator,
    num_persons: int,
    num_joints: int = NUM_JOINTS,
    noise: float = 40.0,
    spread: float = 2000.0,
    with_gt: bool = True,
) -> Scene:
    """Persons with well separated roots; gt is the pose before noise."""
    gt, persons = [], []
    for k in range(num_persons):
        clean = rng.normal(0.0, 250.0, size=(num_joints, 3)) + rng.uniform(-spread, spread, size=3)
        clean[:, 2] += 4000.0
        gt.append(Pose(joints=clean))
        persons.append(Person(id=k, pose=Pose(joints=clean + rng.normal(0.0, noise, size=clean.shape))))
    return Scene(persons=persons, gt=gt if with_gt else None)


def scene_from_roots(roots: list[tuple[float, float, float]], ids: list[int] | None = None) -> Scene:
    """One person per root; every joint sits on the root."""
    ids = ids if ids is not None else list(range(len(roots)))
    persons = [
        Person(id=i, pose=Pose(joints=np.tile(np.asarray(root, dtype=np.float64), (NUM_JOINTS, 1))))
        for i, root in zip(ids, roots)
    ]
    return Scene(persons=persons)


@pytest.fixture
def rng() -> np.random.Generator:
    return make_rng(20240611)


@pytest.fixture
def toy_config() -> ModelConfig:
    return ModelConfig(hidden_size=6, gru_layers=2, mlp_hidden=(10, 8))


@pytest.fixture
def scene3(rng) -> Scene:
    return random_scene(rng, 3)


@pytest.fixture
def dataset(rng) -> list[Scene]:
    return [random_scene(rng, int(n)) for n in rng.integers(1, 4, size=6)]
