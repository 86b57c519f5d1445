from typing import Sequence

import numpy as np

from pinet_refine.exception import CountMismatchError, EmptyInputError
from pinet_refine.skeleton import DEFAULT_ROOT_INDEX, Pose
from .errors import joint_errors

PCK_THRESHOLD_MM = 150.0


def root_aligned_errors(
    preds: Sequence[Pose], gts: Sequence[Pose], root_index: int = DEFAULT_ROOT_INDEX
) -> np.ndarray:
    """(poses, J) matrix of per-joint errors after root alignment."""
    if len(preds) != len(gts):
        raise CountMismatchError(len(gts), len(preds), what="predicted poses")
    if len(preds) == 0:
        raise EmptyInputError("no poses to evaluate")
    return np.stack([joint_errors(p, g, root_index) for p, g in zip(preds, gts)])


def pck3d(
    preds: Sequence[Pose],
    gts: Sequence[Pose],
    threshold: float = PCK_THRESHOLD_MM,
    root_index: int = DEFAULT_ROOT_INDEX,
) -> float:
    """Percent of joints within `threshold` mm (inclusive) after root alignment."""
    errors = root_aligned_errors(preds, gts, root_index)
    return float(100.0 * np.mean(errors <= threshold))


def pck_per_joint(
    preds: Sequence[Pose],
    gts: Sequence[Pose],
    threshold: float = PCK_THRESHOLD_MM,
    root_index: int = DEFAULT_ROOT_INDEX,
) -> list[float]:
    errors = root_aligned_errors(preds, gts, root_index)
    return (100.0 * np.mean(errors <= threshold, axis=0)).tolist()


__all__ = [
    "PCK_THRESHOLD_MM",
    "pck3d",
    "pck_per_joint",
    "root_aligned_errors",
]
