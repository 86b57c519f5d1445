from typing import Any, Optional, Sequence

import numpy as np
from pydantic import field_validator, model_validator

from pinet_refine.base import FrozenModel
from pinet_refine.exception import EmptyInputError, ShapeMismatchError
from .joints import DEFAULT_ROOT_INDEX
from .pose import Pose

EPS_STD = 1e-6  # mm


def _as_vector(value: Any) -> np.ndarray:
    arr = np.array(value, dtype=np.float64).reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise ValueError("statistics must be finite")
    arr.setflags(write=False)
    return arr


class NormStats(FrozenModel):
    """Dataset-wide per-coordinate mean and std of flattened 3J pose vectors (mm)."""

    mean: np.ndarray
    std: np.ndarray

    @field_validator("mean", "std", mode="before")
    @classmethod
    def _validate_vector(cls, value: Any) -> np.ndarray:
        return _as_vector(value)

    @model_validator(mode="after")
    def _check_stats(self) -> "NormStats":
        if self.mean.shape != self.std.shape or self.mean.size % 3 != 0:
            raise ValueError(
                f"mean/std must be matching 3J-vectors, got {self.mean.shape} and {self.std.shape}"
            )
        if np.any(self.std <= 0):
            raise ValueError("every std component must be > 0")
        return self

    @property
    def dim(self) -> int:
        return int(self.mean.size)

    @property
    def num_joints(self) -> int:
        return self.dim // 3


def compute_stats(poses: Sequence[Pose], eps_std: float = EPS_STD) -> NormStats:
    """Population mean/std over all poses; std components below `eps_std` are clamped."""
    if len(poses) == 0:
        raise EmptyInputError("cannot compute statistics of an empty pose list")
    data = np.stack([pose.flatten() for pose in poses])
    mean = data.mean(axis=0)
    std = np.maximum(data.std(axis=0), eps_std)
    return NormStats(mean=mean, std=std)


def normalize(pose: Pose, stats: NormStats) -> np.ndarray:
    vec = pose.flatten()
    if vec.size != stats.dim:
        raise ShapeMismatchError(f"pose has {vec.size} coordinates, stats expect {stats.dim}")
    return (vec - stats.mean) / stats.std


def denormalize(vec: np.ndarray, stats: NormStats) -> Pose:
    vec = np.asarray(vec, dtype=np.float64).reshape(-1)
    if vec.size != stats.dim:
        raise ShapeMismatchError(f"vector has {vec.size} entries, stats expect {stats.dim}")
    return Pose.from_flat(vec * stats.std + stats.mean)


def root_relative(pose: Pose, root_index: int = DEFAULT_ROOT_INDEX) -> Pose:
    """Every joint minus the root, except the root row, which keeps the absolute root position."""
    root = pose.joints[root_index]
    joints = pose.joints - root
    joints[root_index] = root
    return Pose(joints=joints)


def from_root_relative(
    encoded: Pose, root_index: int = DEFAULT_ROOT_INDEX, root: Optional[np.ndarray] = None
) -> Pose:
    """Inverse of `root_relative`; `root` replaces the root position stored in the encoding."""
    root = encoded.joints[root_index] if root is None else np.asarray(root, dtype=np.float64)
    joints = encoded.joints + root
    joints[root_index] = root
    return Pose(joints=joints)


__all__ = [
    "EPS_STD",
    "NormStats",
    "compute_stats",
    "normalize",
    "denormalize",
    "root_relative",
    "from_root_relative",
]
