import logging
from pathlib import Path
from typing import Union

from pinet_refine.model import EpochRecord, save_checkpoint, train
from ..log_setup import JsonLinesWriter
from .base import BaseCommand

logger = logging.getLogger(__name__)

CHECKPOINT_NAME = "checkpoint.pinet"
TRAIN_LOG_NAME = "train_log.jsonl"


def _train_file(data: Path) -> Path:
    return data / "train.json" if data.is_dir() else data


class TrainCommand(BaseCommand):
    name = "train"

    def run(self, data: Union[str, Path], out: Union[str, Path]) -> int:
        """
        Train a network on the training split

        Args:
            data: (str | Path) dataset directory (reads train.json) or a scene file.
            out: (str | Path) directory receiving checkpoint.pinet,
                train_log.jsonl and resolved_config.yaml.

        Returns:
            int: 0
        """
        out = Path(out)
        model_cfg = self.config.model
        scene_file = self._read_scenes(_train_file(Path(data)), num_joints=model_cfg.num_joints)

        with JsonLinesWriter(out / TRAIN_LOG_NAME) as log:

            def on_epoch(record: EpochRecord) -> None:
                log.write(record.model_dump())

            result = train(
                scene_file.scenes,
                model_cfg,
                self.config.train,
                on_epoch=on_epoch,
                progress=self._progress,
            )

        path = save_checkpoint(out / CHECKPOINT_NAME, result.checkpoint)
        self._write_resolved_config(out)
        final = result.history[-1].loss if result.history else float("nan")
        print(f"trained {len(result.history)} epochs, final loss {final:.4f} mm -> {path}")
        return 0


__all__ = [
    "CHECKPOINT_NAME",
    "TRAIN_LOG_NAME",
    "TrainCommand",
]
