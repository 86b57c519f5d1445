import logging
from pathlib import Path
from typing import Optional, Union

from pinet_refine.exception import CountMismatchError, JointCountMismatchError, MissingGroundTruthError
from pinet_refine.metrics import EvaluationReport, compare, evaluate_poses, render_text, write_report
from pinet_refine.skeleton import Pose, SceneFile
from .base import BaseCommand

logger = logging.getLogger(__name__)


def _estimates(scene_file: SceneFile) -> list[Pose]:
    return [pose for scene in scene_file.scenes for pose in scene.poses]


def _has_gt(scene_file: SceneFile) -> bool:
    if all(scene.gt is not None for scene in scene_file.scenes):
        return True
    if any(scene.gt is not None for scene in scene_file.scenes):
        raise MissingGroundTruthError("ground-truth file mixes scenes with and without gt")
    return False


def _ground_truth(scene_file: SceneFile) -> list[Pose]:
    """gt poses where present, otherwise the file's persons are the reference."""
    if _has_gt(scene_file):
        return [pose for scene in scene_file.scenes for pose in scene.gt]
    return _estimates(scene_file)


def _check_aligned(pred: SceneFile, ref: SceneFile) -> None:
    if pred.num_joints != ref.num_joints:
        raise JointCountMismatchError(ref.num_joints, pred.num_joints, where="predictions")
    if len(pred.scenes) != len(ref.scenes):
        raise CountMismatchError(len(ref.scenes), len(pred.scenes), what="scenes")
    for s, (p, r) in enumerate(zip(pred.scenes, ref.scenes)):
        if p.num_persons != r.num_persons:
            raise CountMismatchError(r.num_persons, p.num_persons, what=f"persons in scene {s}")


class EvalCommand(BaseCommand):
    name = "eval"

    def run(
        self,
        pred: Union[str, Path],
        out: Union[str, Path],
        gt: Optional[Union[str, Path]] = None,
    ) -> int:
        """
        Score predictions against ground truth

        Args:
            pred: (str | Path) scene file with the poses to score.
            out: (str | Path) directory receiving report.json, report.txt,
                report.schema.json and resolved_config.yaml.
            gt: (Optional[str | Path]) reference scene file. When it carries
                gt poses, its persons are scored too as the unrefined input
                and the report holds the delta; otherwise its persons are the
                reference. Defaults to `pred`'s own gt.

        Returns:
            int: 0

        Raises:
            CountMismatchError: scene or person counts differ between the files.
            MissingGroundTruthError: no `gt` file and `pred` carries no gt.
        """
        pred_file = self._read_scenes(pred)
        if gt is None and not _has_gt(pred_file):
            raise MissingGroundTruthError(f"{pred} carries no ground truth; pass --gt")
        ref_file = self._read_scenes(gt) if gt is not None else pred_file
        _check_aligned(pred_file, ref_file)
        references = _ground_truth(ref_file)
        estimates = _estimates(pred_file)
        if len(estimates) != len(references):
            raise CountMismatchError(len(references), len(estimates), what="poses")

        root_index = self.config.model.root_index
        refined = evaluate_poses(estimates, references, root_index=root_index)
        baseline = None
        if gt is not None and all(scene.gt is not None for scene in ref_file.scenes):
            baseline = evaluate_poses(_estimates(ref_file), references, root_index=root_index)

        report = EvaluationReport(
            refined=refined,
            input=baseline,
            delta=compare(refined, baseline) if baseline is not None else None,
            config={
                "pred": str(pred),
                "gt": str(gt if gt is not None else pred),
                "run": self.config.model_dump(mode="json"),
            },
        )
        write_report(out, report)
        self._write_resolved_config(out)
        print(render_text(report), end="")
        return 0


__all__ = [
    "EvalCommand",
]
