import json
import logging
from pathlib import Path
from typing import Union

from tqdm import tqdm

from pinet_refine.exception import DataIOError
from pinet_refine.model import load_checkpoint
from pinet_refine.skeleton import write_scenes
from .base import BaseCommand

logger = logging.getLogger(__name__)

ATTENTION_NAME = "attention.json"


class RefineCommand(BaseCommand):
    name = "refine"

    def run(
        self,
        checkpoint: Union[str, Path],
        scenes: Union[str, Path],
        out: Union[str, Path],
        dump_attention: bool = False,
    ) -> int:
        """
        Refine every person of every scene

        Args:
            checkpoint: (str | Path) trained checkpoint.
            scenes: (str | Path) scene file with the initial estimates.
            out: (str | Path) output scene file; ids and ground truth are kept.
            dump_attention: (bool) also write attention.json next to `out`,
                one matrix per scene and person-of-interest.

        Returns:
            int: 0

        Raises:
            JointCountMismatchError: the scene file and the checkpoint disagree on J.
        """
        out = Path(out)
        ckpt = load_checkpoint(checkpoint)
        model = ckpt.model()
        scene_file = self._read_scenes(scenes, num_joints=ckpt.config.num_joints)

        refined = []
        for scene in tqdm(scene_file.scenes, desc="refine", unit="scene", disable=not self._progress):
            refined.append(scene.with_poses(model.refine_scene(scene, threads=self.config.threads)))
        write_scenes(out, refined, ckpt.config.num_joints)
        logger.info("refined %d scenes -> %s", len(refined), out)

        if dump_attention:
            maps = [
                {
                    "scene": s,
                    "person_id": scene.persons[n].id,
                    "ids": scene.ids,
                    "weights": model.attention_map(scene, n).tolist(),
                }
                for s, scene in enumerate(scene_file.scenes)
                for n in range(scene.num_persons)
            ]
            path = out.parent / ATTENTION_NAME
            try:
                path.write_text(json.dumps(maps, indent=1) + "\n", encoding="utf-8")
            except OSError as e:
                raise DataIOError(path, str(e)) from e

        self._write_resolved_config(out.parent)
        print(f"refined {len(refined)} scenes -> {out}")
        return 0


__all__ = [
    "ATTENTION_NAME",
    "RefineCommand",
]
