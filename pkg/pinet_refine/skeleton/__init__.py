from .joints import (
    JOINT_NAMES,
    NUM_JOINTS,
    DEFAULT_ROOT_INDEX,
    joint_names,
    flip_permutation,
)
from .pose import Pose, Person, Scene, root_of
from .ordering import OrderStrategy, Ordering, root_distances, order_for
from .normalization import (
    EPS_STD,
    NormStats,
    compute_stats,
    normalize,
    denormalize,
    root_relative,
    from_root_relative,
)
from .io import SceneFile, parse_scenes, dump_scenes, read_scenes, write_scenes

__all__ = [
    "JOINT_NAMES",
    "NUM_JOINTS",
    "DEFAULT_ROOT_INDEX",
    "joint_names",
    "flip_permutation",
    "Pose",
    "Person",
    "Scene",
    "root_of",
    "OrderStrategy",
    "Ordering",
    "root_distances",
    "order_for",
    "EPS_STD",
    "NormStats",
    "compute_stats",
    "normalize",
    "denormalize",
    "root_relative",
    "from_root_relative",
    "SceneFile",
    "parse_scenes",
    "dump_scenes",
    "read_scenes",
    "write_scenes",
]
