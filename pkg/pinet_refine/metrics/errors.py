import numpy as np

from pinet_refine.skeleton import DEFAULT_ROOT_INDEX, Pose
from .alignment import procrustes_align, root_align


def joint_errors(pred: Pose, gt: Pose, root_index: int = DEFAULT_ROOT_INDEX) -> np.ndarray:
    """Per-joint Euclidean distance (mm) after root alignment."""
    aligned = root_align(pred, gt, root_index)
    return np.linalg.norm(aligned.joints - gt.joints, axis=1)


def mpjpe(pred: Pose, gt: Pose, root_index: int = DEFAULT_ROOT_INDEX) -> float:
    """Mean per-joint position error after root alignment (mm)."""
    return float(joint_errors(pred, gt, root_index).mean())


def pa_mpjpe(pred: Pose, gt: Pose) -> float:
    """Mean per-joint position error after Procrustes alignment (mm)."""
    _, aligned = procrustes_align(pred, gt)
    return float(np.linalg.norm(aligned.joints - gt.joints, axis=1).mean())


__all__ = [
    "joint_errors",
    "mpjpe",
    "pa_mpjpe",
]
