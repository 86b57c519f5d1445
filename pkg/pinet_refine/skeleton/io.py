"""
Scene file reader/writer.

    {"num_joints": 17,
     "scenes": [{"persons": [{"id": 0, "joints": [[x, y, z], ...]}, ...],
                 "gt": [[[x, y, z], ...], ...] | null}]}

Coordinates are millimeters in the camera frame. The writer puts every person
and every ground-truth pose on its own line, and the reader reports problems
with the 1-based line they occur on.
"""

import json
import math
import re
from pathlib import Path
from typing import Any, Optional, Sequence, Union

from pydantic import ValidationError

from pinet_refine.base import BaseModel, FrozenModel
from pinet_refine.exception import DataIOError, SceneFormatError
from .pose import Person, Pose, Scene


class _PersonRecord(BaseModel):
    id: int
    joints: list[list[float]]


class _SceneRecord(BaseModel):
    persons: list[_PersonRecord]
    gt: Optional[list[list[list[float]]]] = None


class _SceneFileRecord(BaseModel):
    num_joints: int
    scenes: list[_SceneRecord]


class SceneFile(FrozenModel):
    num_joints: int
    scenes: list[Scene]


class _LineIndex:
    """Maps (scene, person) locations to the line of the corresponding JSON key."""

    def __init__(self, text: str):
        self._text = text
        self._joints = [m.start() for m in re.finditer(r'"joints"\s*:', text)]
        self._gt = [m.start() for m in re.finditer(r'"gt"\s*:', text)]
        self._persons = [m.start() for m in re.finditer(r'"persons"\s*:', text)]

    def _line(self, positions: list[int], k: int) -> Optional[int]:
        if 0 <= k < len(positions):
            return self._text.count("\n", 0, positions[k]) + 1
        return None

    def person(self, flat_index: int) -> Optional[int]:
        return self._line(self._joints, flat_index)

    def gt(self, scene_index: int) -> Optional[int]:
        return self._line(self._gt, scene_index)

    def scene(self, scene_index: int) -> Optional[int]:
        return self._line(self._persons, scene_index)


def _locate(record: Any, loc: tuple, lines: _LineIndex) -> Optional[int]:
    if len(loc) < 2 or loc[0] != "scenes" or not isinstance(loc[1], int):
        return 1
    s = loc[1]
    if len(loc) >= 4 and loc[2] == "persons" and isinstance(loc[3], int):
        preceding = sum(len(sc.get("persons", [])) for sc in record["scenes"][:s])
        return lines.person(preceding + loc[3])
    if len(loc) >= 3 and loc[2] == "gt":
        return lines.gt(s)
    return lines.scene(s)


def _check_joints(joints: list[list[float]], num_joints: int) -> Optional[str]:
    if len(joints) != num_joints:
        return f"expected {num_joints} joints, got {len(joints)}"
    for j, xyz in enumerate(joints):
        if len(xyz) != 3:
            return f"joint {j} has {len(xyz)} coordinates, expected 3"
        if not all(math.isfinite(c) for c in xyz):
            return f"joint {j} has a non-finite coordinate"
    return None


def parse_scenes(text: str, path: Any = None) -> SceneFile:
    """
    Parse a scene file.

    Args:
        text: (str) the JSON document.
        path: (Any) only used to label error messages.

    Returns:
        SceneFile: validated scenes.

    Raises:
        SceneFormatError: on syntax errors, wrong joint counts, non-finite
            values and structural problems, with the line they occur on.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise SceneFormatError(e.msg, line=e.lineno, path=path) from e

    lines = _LineIndex(text)
    try:
        record = _SceneFileRecord.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first["loc"])
        raise SceneFormatError(
            f"{where}: {first['msg']}", line=_locate(raw, first["loc"], lines), path=path
        ) from e

    scenes: list[Scene] = []
    flat = 0
    for s, scene_record in enumerate(record.scenes):
        persons: list[Person] = []
        for p, person_record in enumerate(scene_record.persons):
            problem = _check_joints(person_record.joints, record.num_joints)
            if problem is not None:
                raise SceneFormatError(
                    f"scene {s} person {p}: {problem}", line=lines.person(flat), path=path
                )
            persons.append(Person(id=person_record.id, pose=Pose(joints=person_record.joints)))
            flat += 1

        gt = None
        if scene_record.gt is not None:
            for k, joints in enumerate(scene_record.gt):
                problem = _check_joints(joints, record.num_joints)
                if problem is not None:
                    raise SceneFormatError(
                        f"scene {s} gt {k}: {problem}", line=lines.gt(s), path=path
                    )
            gt = [Pose(joints=joints) for joints in scene_record.gt]

        try:
            scenes.append(Scene(persons=persons, gt=gt))
        except ValidationError as e:
            raise SceneFormatError(
                f"scene {s}: {e.errors()[0]['msg']}", line=lines.scene(s), path=path
            ) from e

    return SceneFile(num_joints=record.num_joints, scenes=scenes)


def _joints_json(pose: Pose) -> str:
    return json.dumps(pose.joints.tolist(), allow_nan=False)


def dump_scenes(scenes: Sequence[Scene], num_joints: int) -> str:
    out = ["{", f'  "num_joints": {int(num_joints)},', '  "scenes": [']
    for s, scene in enumerate(scenes):
        out.append("    {")
        out.append('      "persons": [')
        for p, person in enumerate(scene.persons):
            sep = "," if p < scene.num_persons - 1 else ""
            out.append(f'        {{"id": {person.id}, "joints": {_joints_json(person.pose)}}}{sep}')
        if scene.gt is None:
            out.append("      ],")
            out.append('      "gt": null')
        else:
            out.append("      ],")
            out.append('      "gt": [')
            for k, pose in enumerate(scene.gt):
                sep = "," if k < len(scene.gt) - 1 else ""
                out.append(f"        {_joints_json(pose)}{sep}")
            out.append("      ]")
        out.append("    }" + ("," if s < len(scenes) - 1 else ""))
    out.append("  ]")
    out.append("}")
    return "\n".join(out) + "\n"


def read_scenes(path: Union[str, Path]) -> SceneFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise DataIOError(path, str(e)) from e
    except UnicodeDecodeError as e:
        raise SceneFormatError(f"not valid UTF-8 ({e.reason} at byte {e.start})", path=path) from e
    return parse_scenes(text, path=path)


def write_scenes(path: Union[str, Path], scenes: Sequence[Scene], num_joints: int) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(dump_scenes(scenes, num_joints), encoding="utf-8")
    except OSError as e:
        raise DataIOError(path, str(e)) from e
    return path


__all__ = [
    "SceneFile",
    "parse_scenes",
    "dump_scenes",
    "read_scenes",
    "write_scenes",
]
