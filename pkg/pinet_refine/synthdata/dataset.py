import json
import logging
from pathlib import Path
from typing import Optional, Union

from pydantic import ValidationError

from pinet_refine.base import BaseModel
from pinet_refine.exception import DataIOError, InvalidConfigError
from pinet_refine.nn import PRNG_ALGORITHM
from pinet_refine.skeleton import Scene, write_scenes
from .config import GenConfig, NoiseConfig
from .corruption import corrupt
from .generator import gen_scene

logger = logging.getLogger(__name__)

MANIFEST_FORMAT_VERSION = 1
TRAIN_FRACTION = 0.8
TRAIN_NOISE_STREAM = 1
TEST_NOISE_STREAM = 2


class DatasetManifest(BaseModel):
    """Everything needed to regenerate a dataset exactly."""

    format_version: int = MANIFEST_FORMAT_VERSION
    gen: GenConfig
    noise: NoiseConfig
    prng_algorithm: str = PRNG_ALGORITHM
    train_indices: list[int]
    test_indices: list[int]
    scene_seed: str = "[gen.seed, index]"
    noise_seed: str = "[gen.seed, 1 (train) | 2 (test), index]"
    files: dict[str, str]


def split_indices(n_scenes: int) -> tuple[list[int], list[int]]:
    """First floor(0.8 n) scene indices train, the rest test."""
    n_train = int(n_scenes * TRAIN_FRACTION)
    return list(range(n_train)), list(range(n_train, n_scenes))


def _noisy(cfg: GenConfig, ncfg: NoiseConfig, index: int, stream: int) -> Scene:
    return corrupt(gen_scene(cfg, index), ncfg, seed=[cfg.seed, stream, index])


def make_dataset(
    cfg: GenConfig,
    ncfg: NoiseConfig,
    out_dir: Optional[Union[str, Path]] = None,
) -> tuple[list[Scene], list[Scene]]:
    """
    Generates and corrupts `cfg.n_scenes` scenes, split 80/20 by index.

    Train and test noise come from disjoint seed streams. When `out_dir` is
    given, writes train.json, test.json and manifest.json there.
    """
    if cfg.n_scenes < 2:
        raise InvalidConfigError(
            cfg.model_dump(), reason=f"n_scenes must be >= 2 to split, got {cfg.n_scenes}"
        )
    train_idx, test_idx = split_indices(cfg.n_scenes)
    train = [_noisy(cfg, ncfg, i, TRAIN_NOISE_STREAM) for i in train_idx]
    test = [_noisy(cfg, ncfg, i, TEST_NOISE_STREAM) for i in test_idx]
    logger.info("generated %d train / %d test scenes (seed %d)", len(train), len(test), cfg.seed)

    if out_dir is not None:
        out_dir = Path(out_dir)
        write_scenes(out_dir / "train.json", train, cfg.num_joints)
        write_scenes(out_dir / "test.json", test, cfg.num_joints)
        manifest = DatasetManifest(
            gen=cfg,
            noise=ncfg,
            train_indices=train_idx,
            test_indices=test_idx,
            files={"train": "train.json", "test": "test.json"},
        )
        write_manifest(out_dir / "manifest.json", manifest)
    return train, test


def write_manifest(path: Path, manifest: DatasetManifest) -> Path:
    try:
        path.write_text(manifest.model_dump_json(indent=2) + "\n", encoding="utf-8")
    except OSError as e:
        raise DataIOError(path, str(e)) from e
    return path


def read_manifest(path: Union[str, Path]) -> DatasetManifest:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as e:
        raise DataIOError(path, str(e)) from e
    try:
        return DatasetManifest.model_validate(raw)
    except ValidationError as e:
        raise InvalidConfigError(raw, reason=str(e)) from e


def regenerate(manifest: DatasetManifest) -> tuple[list[Scene], list[Scene]]:
    """Rebuilds both splits from a manifest."""
    train = [_noisy(manifest.gen, manifest.noise, i, TRAIN_NOISE_STREAM) for i in manifest.train_indices]
    test = [_noisy(manifest.gen, manifest.noise, i, TEST_NOISE_STREAM) for i in manifest.test_indices]
    return train, test


def single_person_scenes(scenes: list[Scene]) -> list[Scene]:
    """Every person as its own one-person scene, for the context-free baseline."""
    return [scene.subscene(n) for scene in scenes for n in range(scene.num_persons)]


__all__ = [
    "MANIFEST_FORMAT_VERSION",
    "DatasetManifest",
    "split_indices",
    "make_dataset",
    "write_manifest",
    "read_manifest",
    "regenerate",
    "single_person_scenes",
]
