from typing import Any

import numpy as np
from pydantic import Field, field_validator

from pinet_refine.base import FrozenModel
from pinet_refine.exception import DegeneratePointSetError, ShapeMismatchError
from pinet_refine.skeleton import DEFAULT_ROOT_INDEX, Pose, root_of

_ORTHO_TOL = 1e-9
_RANK_TOL = 1e-9


class SimilarityTransform(FrozenModel):
    """x -> scale * R x + t (millimeters)."""

    scale: float = Field(gt=0)
    rotation: np.ndarray
    translation: np.ndarray

    @field_validator("rotation", mode="before")
    @classmethod
    def _proper_rotation(cls, value: Any) -> np.ndarray:
        R = np.array(value, dtype=np.float64)
        if R.shape != (3, 3):
            raise ValueError(f"rotation must be 3x3, got {R.shape}")
        if not np.allclose(R.T @ R, np.eye(3), atol=_ORTHO_TOL) or abs(np.linalg.det(R) - 1.0) > _ORTHO_TOL:
            raise ValueError("rotation must be orthogonal with determinant +1")
        return R

    @field_validator("translation", mode="before")
    @classmethod
    def _vector3(cls, value: Any) -> np.ndarray:
        t = np.array(value, dtype=np.float64).reshape(-1)
        if t.shape != (3,):
            raise ValueError(f"translation must be a 3-vector, got {t.shape}")
        return t

    def apply(self, points: np.ndarray) -> np.ndarray:
        return self.scale * np.asarray(points) @ self.rotation.T + self.translation


def _check_pair(pred: Pose, gt: Pose) -> None:
    if pred.num_joints != gt.num_joints:
        raise ShapeMismatchError(f"pred has {pred.num_joints} joints, gt has {gt.num_joints}")


def root_align(pred: Pose, gt: Pose, root_index: int = DEFAULT_ROOT_INDEX) -> Pose:
    """Translate `pred` so its root coincides with the root of `gt`."""
    _check_pair(pred, gt)
    return pred.translated(root_of(gt, root_index) - root_of(pred, root_index))


def procrustes_align(pred: Pose, gt: Pose) -> tuple[SimilarityTransform, Pose]:
    """
    Least-squares similarity transform of `pred` onto `gt`.

    Minimises sum_j |s R pred_j + t - gt_j|^2 over s > 0, proper rotations R
    and translations t: centre both sets, factorise the cross-covariance by
    SVD and flip the smallest singular direction when the fit would reflect.

    Returns:
        tuple[SimilarityTransform, Pose]: the transform and the aligned pred.

    Raises:
        DegeneratePointSetError: when the centred pred has rank < 2.
    """
    _check_pair(pred, gt)
    X = pred.joints
    Y = gt.joints
    mu_x = X.mean(axis=0)
    mu_y = Y.mean(axis=0)
    X0 = X - mu_x
    Y0 = Y - mu_y

    sv = np.linalg.svd(X0, compute_uv=False)
    rank = int(np.sum(sv > _RANK_TOL * max(sv.max(initial=0.0), 1.0)))
    if rank < 2:
        raise DegeneratePointSetError(rank)

    U, S, Vt = np.linalg.svd(Y0.T @ X0)
    d = -1.0 if np.linalg.det(U) * np.linalg.det(Vt) < 0 else 1.0
    D = np.diag([1.0, 1.0, d])
    R = U @ D @ Vt
    scale = float(np.sum(S * np.diag(D)) / np.sum(X0 * X0))
    t = mu_y - scale * R @ mu_x

    transform = SimilarityTransform(scale=scale, rotation=R, translation=t)
    return transform, Pose(joints=transform.apply(X))


__all__ = [
    "SimilarityTransform",
    "root_align",
    "procrustes_align",
]
