import numpy as np
import pytest

from pinet_refine.exception import CountMismatchError, EmptyInputError
from pinet_refine.metrics import pck3d, pck_per_joint
from pinet_refine.skeleton import NUM_JOINTS, Pose


def _pose(rng) -> Pose:
    return Pose(joints=rng.normal(0.0, 300.0, size=(NUM_JOINTS, 3)))


def _displaced(pose: Pose, joint: int, mm: float) -> Pose:
    joints = pose.joints.copy()
    joints[joint, 0] += mm
    return Pose(joints=joints)


def test_threshold_is_inclusive(rng):
    gt = _pose(rng)
    assert pck3d([gt], [gt]) == 100.0
    gt = Pose(joints=np.round(gt.joints))
    assert pck3d([_displaced(gt, 4, 150.0)], [gt]) == 100.0
    assert pck3d([_displaced(gt, 4, 151.0)], [gt]) == pytest.approx(94.118, abs=1e-3)


def test_matches_loop_oracle(rng):
    for _ in range(100):
        preds = [_pose(rng) for _ in range(3)]
        gts = [Pose(joints=p.joints + rng.normal(0.0, 100.0, size=p.joints.shape)) for p in preds]
        hits = 0
        for p, g in zip(preds, gts):
            shift = g.joints[0] - p.joints[0]
            for j in range(NUM_JOINTS):
                hits += int(np.linalg.norm(p.joints[j] + shift - g.joints[j]) <= 150.0)
        assert pck3d(preds, gts) == pytest.approx(100.0 * hits / (3 * NUM_JOINTS), abs=1e-12)


def test_per_joint(rng):
    gts = [_pose(rng) for _ in range(4)]
    assert pck_per_joint(gts, gts) == [100.0] * NUM_JOINTS

    preds = [_displaced(g, 5, 400.0) for g in gts]
    per_joint = pck_per_joint(preds, gts)
    assert per_joint[5] == 0.0
    assert all(v == 100.0 for j, v in enumerate(per_joint) if j != 5)

    noisy = [Pose(joints=g.joints + rng.normal(0.0, 120.0, size=g.joints.shape)) for g in gts]
    assert np.mean(pck_per_joint(noisy, gts)) == pytest.approx(pck3d(noisy, gts), abs=1e-9)


def test_count_mismatch(rng):
    with pytest.raises(CountMismatchError):
        pck3d([_pose(rng)], [_pose(rng), _pose(rng)])
    with pytest.raises(EmptyInputError):
        pck3d([], [])
