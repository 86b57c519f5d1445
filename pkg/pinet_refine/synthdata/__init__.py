from .config import TEMPLATE_SKELETON, GenConfig, NoiseConfig
from .generator import mirror_offsets, scene_offsets, gen_scene
from .corruption import corrupt
from .dataset import (
    MANIFEST_FORMAT_VERSION,
    DatasetManifest,
    split_indices,
    make_dataset,
    write_manifest,
    read_manifest,
    regenerate,
    single_person_scenes,
)

__all__ = [
    "TEMPLATE_SKELETON",
    "GenConfig",
    "NoiseConfig",
    "mirror_offsets",
    "scene_offsets",
    "gen_scene",
    "corrupt",
    "MANIFEST_FORMAT_VERSION",
    "DatasetManifest",
    "split_indices",
    "make_dataset",
    "write_manifest",
    "read_manifest",
    "regenerate",
    "single_person_scenes",
]
