import numpy as np
import numpy.testing as npt
import pytest

from pinet_refine.exception import EmptyInputError
from pinet_refine.skeleton import (
    EPS_STD,
    NUM_JOINTS,
    Pose,
    compute_stats,
    denormalize,
    from_root_relative,
    normalize,
    root_relative,
)


def test_single_pose_clamps_std(rng):
    pose = Pose(joints=rng.normal(size=(NUM_JOINTS, 3)))
    stats = compute_stats([pose])
    npt.assert_array_equal(stats.mean, pose.flatten())
    npt.assert_array_equal(stats.std, np.full(3 * NUM_JOINTS, EPS_STD))


def test_two_pose_analytic():
    stats = compute_stats([Pose(joints=np.zeros((NUM_JOINTS, 3))), Pose(joints=np.full((NUM_JOINTS, 3), 2.0))])
    npt.assert_array_equal(stats.mean, np.ones(3 * NUM_JOINTS))
    npt.assert_array_equal(stats.std, np.ones(3 * NUM_JOINTS))


def test_matches_two_pass_oracle(rng):
    poses = [Pose(joints=rng.normal(100.0, 300.0, size=(NUM_JOINTS, 3))) for _ in range(100)]
    stats = compute_stats(poses)
    data = [p.flatten() for p in poses]
    for k in range(3 * NUM_JOINTS):
        column = [row[k] for row in data]
        mean = sum(column) / len(column)
        var = sum((v - mean) ** 2 for v in column) / len(column)
        assert stats.mean[k] == pytest.approx(mean, rel=1e-9)
        assert stats.std[k] == pytest.approx(var**0.5, rel=1e-9)


def test_normalize_denormalize(rng):
    poses = [Pose(joints=rng.normal(size=(NUM_JOINTS, 3))) for _ in range(10)]
    stats = compute_stats(poses)

    npt.assert_allclose(normalize(Pose.from_flat(stats.mean), stats), 0.0, atol=1e-12)
    npt.assert_allclose(normalize(Pose.from_flat(stats.mean + stats.std), stats), 1.0, rtol=1e-12)
    npt.assert_allclose(denormalize(np.zeros(stats.dim), stats).flatten(), stats.mean)
    npt.assert_allclose(denormalize(np.ones(stats.dim), stats).flatten(), stats.mean + stats.std)

    pose = Pose(joints=rng.normal(size=(NUM_JOINTS, 3)))
    npt.assert_allclose(denormalize(normalize(pose, stats), stats).joints, pose.joints, rtol=1e-12, atol=1e-12)


def test_empty_input():
    with pytest.raises(EmptyInputError):
        compute_stats([])


def test_root_relative_encoding(rng):
    pose = Pose(joints=rng.normal(0.0, 300.0, size=(NUM_JOINTS, 3)) + [500.0, -200.0, 4000.0])
    encoded = root_relative(pose)
    npt.assert_array_equal(encoded.joints[0], pose.joints[0])
    npt.assert_allclose(encoded.joints[1:], pose.joints[1:] - pose.joints[0], rtol=0, atol=1e-12)
    npt.assert_allclose(from_root_relative(encoded).joints, pose.joints, rtol=0, atol=1e-9)

    moved = from_root_relative(encoded, root=[0.0, 0.0, 1000.0])
    npt.assert_array_equal(moved.joints[0], [0.0, 0.0, 1000.0])
    npt.assert_allclose(moved.joints[5] - moved.joints[0], pose.joints[5] - pose.joints[0], atol=1e-9)


def test_root_relative_other_root(rng):
    pose = Pose(joints=rng.normal(size=(NUM_JOINTS, 3)))
    encoded = root_relative(pose, root_index=3)
    npt.assert_array_equal(encoded.joints[3], pose.joints[3])
    npt.assert_allclose(encoded.joints[0], pose.joints[0] - pose.joints[3], atol=1e-12)
