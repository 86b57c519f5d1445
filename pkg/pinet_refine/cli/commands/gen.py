import logging
from pathlib import Path
from typing import Union

from pinet_refine.synthdata import make_dataset
from .base import BaseCommand

logger = logging.getLogger(__name__)


class GenCommand(BaseCommand):
    name = "gen"

    def run(self, out: Union[str, Path]) -> int:
        """
        Generate a synthetic dataset

        Args:
            out: (str | Path) directory receiving train.json, test.json,
                manifest.json and resolved_config.yaml.

        Returns:
            int: 0
        """
        train, test = make_dataset(self.config.gen, self.config.noise, out_dir=out)
        self._write_resolved_config(out)
        print(f"wrote {len(train)} train / {len(test)} test scenes to {out}")
        return 0


__all__ = [
    "GenCommand",
]
