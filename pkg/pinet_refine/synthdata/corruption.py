from typing import Sequence, Union

import numpy as np

from pinet_refine.exception import MissingGroundTruthError
from pinet_refine.nn import make_rng
from pinet_refine.skeleton import Pose, Scene
from .config import NoiseConfig


def corrupt(scene: Scene, ncfg: NoiseConfig, seed: Union[int, Sequence[int]]) -> Scene:
    """
    Detector-like noise on the estimated poses; ground truth is left untouched.

    Per person: one shared root offset (root_sigma), isotropic per-joint noise
    (joint_sigma), and with probability outlier_prob per joint an extra
    outlier_sigma displacement.
    """
    if scene.gt is None:
        raise MissingGroundTruthError("corrupt needs the clean poses as ground truth")
    rng = make_rng(seed)
    noisy = []
    for clean in scene.gt:
        J = clean.num_joints
        root_shift = rng.normal(0.0, ncfg.root_sigma, size=3)
        jitter = rng.normal(0.0, ncfg.joint_sigma, size=(J, 3))
        outliers = rng.random(J) < ncfg.outlier_prob
        extra = rng.normal(0.0, ncfg.outlier_sigma, size=(J, 3)) * outliers[:, None]
        noisy.append(Pose(joints=clean.joints + root_shift + jitter + extra))
    return scene.with_poses(noisy)


__all__ = [
    "corrupt",
]
