from typing import Any, Optional

import numpy as np
from pydantic import Field, field_validator, model_validator

from pinet_refine.base import BaseModel

# 17-joint standing template, mm, pelvis at the origin (x right, y down, z forward)
TEMPLATE_SKELETON: tuple[tuple[float, float, float], ...] = (
    (0.0, 0.0, 0.0),  # pelvis
    (-130.0, 0.0, 0.0),  # r_hip
    (-130.0, 440.0, 0.0),  # r_knee
    (-130.0, 880.0, 0.0),  # r_ankle
    (130.0, 0.0, 0.0),  # l_hip
    (130.0, 440.0, 0.0),  # l_knee
    (130.0, 880.0, 0.0),  # l_ankle
    (0.0, -230.0, 0.0),  # spine
    (0.0, -480.0, 0.0),  # thorax
    (0.0, -560.0, 0.0),  # neck
    (0.0, -680.0, 0.0),  # head
    (170.0, -480.0, 0.0),  # l_shoulder
    (170.0, -200.0, 0.0),  # l_elbow
    (170.0, 40.0, 0.0),  # l_wrist
    (-170.0, -480.0, 0.0),  # r_shoulder
    (-170.0, -200.0, 0.0),  # r_elbow
    (-170.0, 40.0, 0.0),  # r_wrist
)


class GenConfig(BaseModel):
    n_scenes: int = Field(default=10, ge=1)
    persons_min: int = Field(default=2, ge=1)
    persons_max: int = Field(default=3, ge=1)
    seed: int = Field(default=0, ge=0)
    base_skeleton: Optional[list[tuple[float, float, float]]] = None
    interaction_strength: float = Field(default=0.8, ge=0.0, le=1.0)
    placement_radius: float = Field(default=1500.0, gt=0)
    pose_sigma: float = Field(default=80.0, ge=0, description="limb offset spread, mm")
    depth: float = Field(default=4000.0, gt=0, description="distance of the placement disc from the camera, mm")

    @field_validator("base_skeleton")
    @classmethod
    def _finite_skeleton(cls, value: Any) -> Any:
        if value is not None and (len(value) == 0 or not np.all(np.isfinite(np.asarray(value)))):
            raise ValueError("base_skeleton must be a non-empty list of finite 3-vectors")
        return value

    @model_validator(mode="after")
    def _check_persons(self) -> "GenConfig":
        if self.persons_max < self.persons_min:
            raise ValueError(
                f"persons_max ({self.persons_max}) must be >= persons_min ({self.persons_min})"
            )
        return self

    @property
    def template(self) -> np.ndarray:
        return np.array(self.base_skeleton or TEMPLATE_SKELETON, dtype=np.float64)

    @property
    def num_joints(self) -> int:
        return len(self.base_skeleton or TEMPLATE_SKELETON)


class NoiseConfig(BaseModel):
    joint_sigma: float = Field(default=40.0, ge=0)
    root_sigma: float = Field(default=60.0, ge=0)
    outlier_prob: float = Field(default=0.02, ge=0, le=1)
    outlier_sigma: float = Field(default=300.0, ge=0)


__all__ = [
    "TEMPLATE_SKELETON",
    "GenConfig",
    "NoiseConfig",
]
