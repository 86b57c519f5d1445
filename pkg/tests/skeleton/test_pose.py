import numpy as np
import numpy.testing as npt
import pytest
from pydantic import ValidationError

from pinet_refine.exception import IndexOutOfRangeError
from pinet_refine.skeleton import NUM_JOINTS, Person, Pose, Scene, root_of


def _pose(value: float = 0.0, num_joints: int = NUM_JOINTS) -> Pose:
    return Pose(joints=np.full((num_joints, 3), value))


def test_root_of():
    joints = np.zeros((NUM_JOINTS, 3))
    assert np.array_equal(root_of(Pose(joints=joints)), [0.0, 0.0, 0.0])

    joints[0] = (100.0, 200.0, 3000.0)
    assert np.array_equal(root_of(Pose(joints=joints)), [100.0, 200.0, 3000.0])

    joints[2] = (1.0, 2.0, 3.0)
    assert np.array_equal(root_of(Pose(joints=joints), root_index=2), [1.0, 2.0, 3.0])

    with pytest.raises(IndexOutOfRangeError):
        root_of(Pose(joints=joints), root_index=NUM_JOINTS)


def test_pose_rejects_bad_joints():
    with pytest.raises(ValidationError):
        Pose(joints=np.zeros((4, 2)))
    with pytest.raises(ValidationError):
        Pose(joints=[[0.0, np.nan, 0.0]])
    with pytest.raises(ValidationError):
        Pose(joints=np.zeros((0, 3)))


def test_pose_is_read_only():
    pose = _pose(1.0)
    with pytest.raises(ValueError):
        pose.joints[0, 0] = 5.0


def test_flatten_round_trip(rng):
    pose = Pose(joints=rng.normal(size=(NUM_JOINTS, 3)))
    flat = pose.flatten()
    assert flat.shape == (3 * NUM_JOINTS,)
    npt.assert_array_equal(Pose.from_flat(flat).joints, pose.joints)


def test_scene_invariants():
    with pytest.raises(ValidationError):
        Scene(persons=[])
    with pytest.raises(ValidationError):
        Scene(persons=[Person(id=1, pose=_pose()), Person(id=1, pose=_pose())])
    with pytest.raises(ValidationError):
        Scene(persons=[Person(id=0, pose=_pose()), Person(id=1, pose=_pose(num_joints=15))])
    with pytest.raises(ValidationError):
        Scene(persons=[Person(id=0, pose=_pose())], gt=[_pose(), _pose()])


def test_scene_helpers():
    scene = Scene(
        persons=[Person(id=7, pose=_pose(1.0)), Person(id=3, pose=_pose(2.0))],
        gt=[_pose(10.0), _pose(20.0)],
    )
    assert scene.num_persons == 2
    assert scene.num_joints == NUM_JOINTS
    assert scene.ids == [7, 3]
    assert scene.index_of(3) == 1
    assert scene.has_gt

    swapped = scene.permuted([1, 0])
    assert swapped.ids == [3, 7]
    assert swapped.gt[0].joints[0, 0] == 20.0

    single = scene.subscene(1)
    assert single.ids == [3]
    assert single.gt[0].joints[0, 0] == 20.0

    moved = scene.with_poses([_pose(5.0), _pose(6.0)])
    assert moved.ids == scene.ids
    assert all(a is b for a, b in zip(moved.gt, scene.gt))
    assert moved.poses[1].joints[0, 0] == 6.0

    with pytest.raises(IndexOutOfRangeError):
        scene.check_index(2)
