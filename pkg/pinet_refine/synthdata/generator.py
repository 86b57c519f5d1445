"""
Correlated multi-person scenes.

Person 0 draws limb offsets around the template. Every later person answers
its nearest already-placed neighbour: its offsets blend the mirror image of
the neighbour's offsets (weight kappa) with a fresh draw (weight
sqrt(1 - kappa^2), keeping the marginal spread fixed). With kappa = 1 a pose
is an exact function of its neighbour's.
"""

import numpy as np

from pinet_refine.nn import make_rng
from pinet_refine.skeleton import DEFAULT_ROOT_INDEX, Person, Pose, Scene, flip_permutation
from .config import GenConfig


def mirror_offsets(offsets: np.ndarray) -> np.ndarray:
    """Left/right swapped and reflected across the sagittal (x = 0) plane."""
    mirrored = offsets[flip_permutation(offsets.shape[0])].copy()
    mirrored[:, 0] *= -1.0
    return mirrored


def _draw_offsets(rng: np.random.Generator, cfg: GenConfig) -> np.ndarray:
    offsets = rng.normal(0.0, cfg.pose_sigma, size=(cfg.num_joints, 3))
    offsets[DEFAULT_ROOT_INDEX] = 0.0
    return offsets


def _draw_root(rng: np.random.Generator, cfg: GenConfig) -> np.ndarray:
    angle = rng.uniform(0.0, 2.0 * np.pi)
    radius = cfg.placement_radius * np.sqrt(rng.uniform())
    return np.array([radius * np.cos(angle), 0.0, cfg.depth + radius * np.sin(angle)])


def scene_offsets(cfg: GenConfig, index: int) -> tuple[np.ndarray, np.ndarray]:
    """Roots (N, 3) and limb offsets (N, J, 3) of scene `index`."""
    rng = make_rng([cfg.seed, index])
    n_persons = int(rng.integers(cfg.persons_min, cfg.persons_max + 1))
    kappa = cfg.interaction_strength
    roots = np.stack([_draw_root(rng, cfg) for _ in range(n_persons)])
    offsets = np.empty((n_persons, cfg.num_joints, 3))
    offsets[0] = _draw_offsets(rng, cfg)
    for k in range(1, n_persons):
        nearest = int(np.argmin(np.linalg.norm(roots[:k] - roots[k], axis=1)))
        fresh = _draw_offsets(rng, cfg)
        offsets[k] = kappa * mirror_offsets(offsets[nearest]) + np.sqrt(1.0 - kappa**2) * fresh
    return roots, offsets


def gen_scene(cfg: GenConfig, index: int) -> Scene:
    """
    Clean scene `index`; persons and ground truth coincide until `corrupt`.

    Deterministic in (cfg.seed, index).
    """
    roots, offsets = scene_offsets(cfg, index)
    template = cfg.template
    poses = [Pose(joints=template + offsets[k] + roots[k]) for k in range(len(roots))]
    persons = [Person(id=k, pose=pose) for k, pose in enumerate(poses)]
    return Scene(persons=persons, gt=poses)


__all__ = [
    "mirror_offsets",
    "scene_offsets",
    "gen_scene",
]
