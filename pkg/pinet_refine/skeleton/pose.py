from typing import Any, Optional, Sequence

import numpy as np
from pydantic import field_validator, model_validator

from pinet_refine.base import FrozenModel
from pinet_refine.exception import IndexOutOfRangeError
from .joints import DEFAULT_ROOT_INDEX


def _as_joint_array(value: Any) -> np.ndarray:
    arr = np.array(value, dtype=np.float64)
    if arr.ndim == 1 and arr.size % 3 == 0:
        arr = arr.reshape(-1, 3)
    if arr.ndim != 2 or arr.shape[1] != 3 or arr.shape[0] == 0:
        raise ValueError(f"joints must have shape (J, 3) with J >= 1, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("joints contain non-finite coordinates")
    arr.setflags(write=False)
    return arr


class Pose(FrozenModel):
    """One person's joints, millimeters, camera frame."""

    joints: np.ndarray

    @field_validator("joints", mode="before")
    @classmethod
    def _validate_joints(cls, value: Any) -> np.ndarray:
        return _as_joint_array(value)

    @property
    def num_joints(self) -> int:
        return int(self.joints.shape[0])

    def flatten(self) -> np.ndarray:
        return self.joints.reshape(-1)

    @classmethod
    def from_flat(cls, vec: np.ndarray) -> "Pose":
        return cls(joints=np.asarray(vec, dtype=np.float64).reshape(-1, 3))

    def translated(self, offset: np.ndarray) -> "Pose":
        return Pose(joints=self.joints + np.asarray(offset, dtype=np.float64))


class Person(FrozenModel):
    id: int
    pose: Pose


class Scene(FrozenModel):
    """N persons with optional index-aligned ground truth."""

    persons: list[Person]
    gt: Optional[list[Pose]] = None

    @model_validator(mode="after")
    def _check_scene(self) -> "Scene":
        if len(self.persons) == 0:
            raise ValueError("a scene needs at least one person")
        ids = [p.id for p in self.persons]
        if len(set(ids)) != len(ids):
            raise ValueError(f"person ids must be unique, got {ids}")
        num_joints = self.persons[0].pose.num_joints
        poses = [p.pose for p in self.persons] + list(self.gt or [])
        if any(pose.num_joints != num_joints for pose in poses):
            raise ValueError("all poses of a scene must share one joint count")
        if self.gt is not None and len(self.gt) != len(self.persons):
            raise ValueError(
                f"gt has {len(self.gt)} poses for {len(self.persons)} persons"
            )
        return self

    @property
    def num_persons(self) -> int:
        return len(self.persons)

    @property
    def num_joints(self) -> int:
        return self.persons[0].pose.num_joints

    @property
    def ids(self) -> list[int]:
        return [p.id for p in self.persons]

    @property
    def poses(self) -> list[Pose]:
        return [p.pose for p in self.persons]

    @property
    def has_gt(self) -> bool:
        return self.gt is not None

    def check_index(self, n: int) -> None:
        if not 0 <= n < self.num_persons:
            raise IndexOutOfRangeError(
                f"person index {n} out of range for a scene of {self.num_persons}"
            )

    def index_of(self, person_id: int) -> int:
        return self.ids.index(person_id)

    def with_poses(self, poses: Sequence[Pose]) -> "Scene":
        """Same ids and ground truth, new estimated poses."""
        persons = [Person(id=p.id, pose=pose) for p, pose in zip(self.persons, poses, strict=True)]
        return Scene(persons=persons, gt=self.gt)

    def permuted(self, perm: Sequence[int]) -> "Scene":
        persons = [self.persons[k] for k in perm]
        gt = [self.gt[k] for k in perm] if self.gt is not None else None
        return Scene(persons=persons, gt=gt)

    def subscene(self, n: int) -> "Scene":
        """Single-person scene holding person `n` only."""
        self.check_index(n)
        gt = [self.gt[n]] if self.gt is not None else None
        return Scene(persons=[self.persons[n]], gt=gt)


def root_of(pose: Pose, root_index: int = DEFAULT_ROOT_INDEX) -> np.ndarray:
    """Root joint of `pose` (pelvis by default)."""
    if not 0 <= root_index < pose.num_joints:
        raise IndexOutOfRangeError(
            f"root index {root_index} out of range for {pose.num_joints} joints"
        )
    return pose.joints[root_index]


__all__ = [
    "Pose",
    "Person",
    "Scene",
    "root_of",
]
