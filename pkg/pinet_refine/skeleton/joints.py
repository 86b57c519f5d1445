"""
17-joint skeleton convention (pelvis-rooted).
"""

JOINT_NAMES: tuple[str, ...] = (
    "pelvis",
    "r_hip",
    "r_knee",
    "r_ankle",
    "l_hip",
    "l_knee",
    "l_ankle",
    "spine",
    "thorax",
    "neck",
    "head",
    "l_shoulder",
    "l_elbow",
    "l_wrist",
    "r_shoulder",
    "r_elbow",
    "r_wrist",
)

NUM_JOINTS = len(JOINT_NAMES)

DEFAULT_ROOT_INDEX = 0

# left/right pairs, used by the mirror response of the synthetic generator
FLIP_PAIRS: tuple[tuple[int, int], ...] = (
    (1, 4),
    (2, 5),
    (3, 6),
    (11, 14),
    (12, 15),
    (13, 16),
)


def joint_names(num_joints: int) -> list[str]:
    """Names for a skeleton of `num_joints`; falls back to `j<k>` for non-standard sizes."""
    if num_joints == NUM_JOINTS:
        return list(JOINT_NAMES)
    return [f"j{k}" for k in range(num_joints)]


def flip_permutation(num_joints: int) -> list[int]:
    perm = list(range(num_joints))
    if num_joints != NUM_JOINTS:
        return perm
    for left, right in FLIP_PAIRS:
        perm[left], perm[right] = right, left
    return perm


__all__ = [
    "JOINT_NAMES",
    "NUM_JOINTS",
    "DEFAULT_ROOT_INDEX",
    "FLIP_PAIRS",
    "joint_names",
    "flip_permutation",
]
