import numpy as np
import numpy.testing as npt
import pytest

from pinet_refine.synthdata import GenConfig, TEMPLATE_SKELETON, gen_scene, mirror_offsets, scene_offsets


def _pairs(cfg: GenConfig, n_scenes: int) -> tuple[np.ndarray, np.ndarray]:
    """Mirrored offsets of person 0 and offsets of person 1, non-root coordinates pooled."""
    a, b = [], []
    for index in range(n_scenes):
        _, offsets = scene_offsets(cfg, index)
        a.append(mirror_offsets(offsets[0])[1:].ravel())
        b.append(offsets[1][1:].ravel())
    return np.concatenate(a), np.concatenate(b)


def test_mirror_is_an_involution(rng):
    offsets = rng.normal(size=(17, 3))
    npt.assert_array_equal(mirror_offsets(mirror_offsets(offsets)), offsets)
    mirrored = mirror_offsets(offsets)
    npt.assert_array_equal(mirrored[4], offsets[1] * [-1.0, 1.0, 1.0])
    npt.assert_array_equal(mirrored[0], offsets[0] * [-1.0, 1.0, 1.0])


def test_full_interaction_makes_poses_predictable():
    cfg = GenConfig(n_scenes=50, persons_min=2, persons_max=4, interaction_strength=1.0, seed=3)
    for index in range(cfg.n_scenes):
        roots, offsets = scene_offsets(cfg, index)
        for k in range(1, len(roots)):
            nearest = int(np.argmin(np.linalg.norm(roots[:k] - roots[k], axis=1)))
            npt.assert_array_equal(offsets[k], mirror_offsets(offsets[nearest]))


def test_no_interaction_is_uncorrelated():
    cfg = GenConfig(n_scenes=1000, persons_min=2, persons_max=2, interaction_strength=0.0, seed=4)
    a, b = _pairs(cfg, cfg.n_scenes)
    assert abs(np.corrcoef(a, b)[0, 1]) < 0.1


def test_default_interaction_is_correlated():
    cfg = GenConfig(n_scenes=300, persons_min=2, persons_max=2, seed=5)
    a, b = _pairs(cfg, cfg.n_scenes)
    assert np.corrcoef(a, b)[0, 1] == pytest.approx(0.8, abs=0.05)


def test_scene_layout():
    cfg = GenConfig(n_scenes=30, persons_min=2, persons_max=3, seed=6)
    counts = set()
    for index in range(cfg.n_scenes):
        scene = gen_scene(cfg, index)
        counts.add(scene.num_persons)
        assert scene.ids == list(range(scene.num_persons))
        assert scene.num_joints == len(TEMPLATE_SKELETON)
        for person, gt in zip(scene.persons, scene.gt):
            assert person.pose is gt
            root = gt.joints[0]
            assert np.hypot(root[0], root[2] - cfg.depth) <= cfg.placement_radius + 1e-9
    assert counts == {2, 3}


def test_deterministic_per_index():
    cfg = GenConfig(seed=7)
    a, b = gen_scene(cfg, 4), gen_scene(cfg, 4)
    for p, q in zip(a.poses, b.poses):
        assert np.array_equal(p.joints, q.joints)
    other = gen_scene(cfg.model_copy(update={"seed": 8}), 4)
    assert not np.array_equal(a.poses[0].joints, other.poses[0].joints)


def test_custom_skeleton():
    skeleton = [(0.0, 0.0, 0.0), (0.0, -500.0, 0.0), (0.0, 400.0, 0.0)]
    scene = gen_scene(GenConfig(base_skeleton=skeleton, seed=1), 0)
    assert scene.num_joints == 3
    with pytest.raises(ValueError):
        GenConfig(base_skeleton=[(0.0, float("nan"), 0.0)])
    with pytest.raises(ValueError):
        GenConfig(persons_min=3, persons_max=2)
