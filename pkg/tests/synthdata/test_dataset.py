import numpy as np
import pytest

from pinet_refine.exception import DataIOError, InvalidConfigError
from pinet_refine.skeleton import read_scenes
from pinet_refine.synthdata import (
    GenConfig,
    NoiseConfig,
    make_dataset,
    read_manifest,
    regenerate,
    single_person_scenes,
    split_indices,
)


def _same(a, b) -> bool:
    return all(
        np.array_equal(p.joints, q.joints) for sa, sb in zip(a, b, strict=True) for p, q in zip(sa.poses, sb.poses)
    )


def test_split():
    train, test = split_indices(10)
    assert train == list(range(8))
    assert test == [8, 9]
    assert split_indices(3) == ([0, 1], [2])


def test_make_dataset(tmp_path):
    cfg = GenConfig(n_scenes=10, seed=3)
    train, test = make_dataset(cfg, NoiseConfig(), out_dir=tmp_path)
    assert (len(train), len(test)) == (8, 2)
    assert all(scene.has_gt for scene in train + test)

    on_disk = read_scenes(tmp_path / "train.json")
    assert on_disk.num_joints == 17
    assert _same(on_disk.scenes, train)

    manifest = read_manifest(tmp_path / "manifest.json")
    assert manifest.train_indices == list(range(8))
    assert set(manifest.train_indices).isdisjoint(manifest.test_indices)
    assert manifest.prng_algorithm == "PCG64"

    again_train, again_test = regenerate(manifest)
    assert _same(again_train, train)
    assert _same(again_test, test)


def test_train_and_test_noise_streams_differ():
    cfg = GenConfig(n_scenes=2, seed=3)
    train, test = make_dataset(cfg, NoiseConfig())
    assert len(train) == len(test) == 1
    assert not np.array_equal(train[0].poses[0].joints, test[0].poses[0].joints)


def test_needs_two_scenes():
    with pytest.raises(InvalidConfigError):
        make_dataset(GenConfig(n_scenes=1), NoiseConfig())


def test_single_person_scenes():
    train, _ = make_dataset(GenConfig(n_scenes=5, persons_min=2, persons_max=3, seed=1), NoiseConfig())
    singles = single_person_scenes(train)
    assert len(singles) == sum(scene.num_persons for scene in train)
    assert all(scene.num_persons == 1 and scene.has_gt for scene in singles)


def test_manifest_that_is_not_utf8(tmp_path):
    path = tmp_path / "manifest.json"
    path.write_bytes(b'{"gen": "\xff"}')
    with pytest.raises(DataIOError):
        read_manifest(path)
