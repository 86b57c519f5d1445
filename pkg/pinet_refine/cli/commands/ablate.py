"""
Ablation runner: the order x attention x bidirectional x GRU-depth matrix,
plus a context-free cell, each trained and scored once per shared seed.
"""

import itertools
import json
import logging
import statistics
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional, Sequence, Union

import yaml
from pydantic import Field
from tqdm import tqdm

from pinet_refine.base import BaseModel
from pinet_refine.exception import DataIOError
from pinet_refine.metrics import MetricReport, evaluate_poses, format_table
from pinet_refine.model import ModelConfig, param_count, refine_dataset, train
from pinet_refine.nn import TrainConfig
from pinet_refine.skeleton import OrderStrategy, Scene
from pinet_refine.synthdata import single_person_scenes
from .base import BaseCommand

logger = logging.getLogger(__name__)

ABLATION_NAME = "ablation.json"
ABLATION_TABLE_NAME = "ablation.txt"


class AblationCell(BaseModel):
    name: str
    order: OrderStrategy
    use_attention: bool
    bidirectional: bool
    gru_layers: int
    context_free: bool = False
    param_count: int
    model: ModelConfig


class CellResult(BaseModel):
    cell: AblationCell
    train: TrainConfig
    seeds: list[int]
    per_seed: list[MetricReport]
    mpjpe: float = Field(description="median over seeds, mm")
    pa_mpjpe: float = Field(description="median over seeds, mm")
    pck: float = Field(description="median over seeds, percent")


def cell_name(order: str, use_attention: bool, bidirectional: bool, gru_layers: int) -> str:
    return f"{order}-{'att' if use_attention else 'noatt'}-{'bi' if bidirectional else 'uni'}-l{gru_layers}"


def _flatten(poses: Sequence[Sequence]) -> list:
    return [pose for group in poses for pose in group]


def score(predictions: list, scenes: Sequence[Scene], root_index: int) -> MetricReport:
    gts = _flatten([scene.gt for scene in scenes])
    return evaluate_poses(_flatten(predictions), gts, root_index=root_index)


class AblateCommand(BaseCommand):
    name = "ablate"

    def cells(self) -> list[AblationCell]:
        """Every matrix cell, then the context-free cell when enabled."""
        axes = self.config.ablate
        base = self.config.model.model_dump()
        out = []
        for order, att, bi, layers in itertools.product(
            axes.orders, axes.attention, axes.bidirectional, axes.gru_layers
        ):
            raw = {**base, "order": order, "use_attention": att, "bidirectional": bi, "gru_layers": layers}
            model = self._validate_config(raw, ModelConfig)
            out.append(
                AblationCell(
                    name=cell_name(order, att, bi, layers),
                    order=order,
                    use_attention=att,
                    bidirectional=bi,
                    gru_layers=layers,
                    param_count=param_count(model),
                    model=model,
                )
            )
        if axes.context_free:
            model = self.config.model
            out.append(
                AblationCell(
                    name="context_free",
                    order=model.order,
                    use_attention=model.use_attention,
                    bidirectional=model.bidirectional,
                    gru_layers=model.gru_layers,
                    context_free=True,
                    param_count=param_count(model),
                    model=model,
                )
            )
        return out

    def _run_one(
        self, cell: AblationCell, seed: int, train_set: list[Scene], test_set: list[Scene]
    ) -> MetricReport:
        if cell.context_free:
            train_set, test_set = single_person_scenes(train_set), single_person_scenes(test_set)
        tcfg = self.config.train.model_copy(update={"seed": seed})
        result = train(train_set, cell.model, tcfg)
        model = result.checkpoint.model()
        report = score(refine_dataset(model, test_set), test_set, cell.model.root_index)
        logger.info("%s seed %d: mpjpe %.2f pa-mpjpe %.2f", cell.name, seed, report.mpjpe, report.pa_mpjpe)
        return report

    def run(self, data: Union[str, Path], out: Union[str, Path], cells: Optional[list[AblationCell]] = None) -> int:
        """
        Train and score every ablation cell

        Args:
            data: (str | Path) dataset directory with train.json and test.json.
            out: (str | Path) directory receiving ablation.json, ablation.txt,
                cells/<name>/{config.yaml,metrics.json} and resolved_config.yaml.
            cells: (Optional[list[AblationCell]]) replaces the configured matrix.

        Returns:
            int: 0
        """
        data, out = Path(data), Path(out)
        J = self.config.model.num_joints
        train_set = self._read_scenes(data / "train.json", num_joints=J).scenes
        test_set = self._read_scenes(data / "test.json", num_joints=J).scenes
        cells = cells if cells is not None else self.cells()
        seeds = self.config.ablate.seeds
        jobs = [(cell, seed) for cell in cells for seed in seeds]
        logger.info("ablation: %d cells x %d seeds", len(cells), len(seeds))

        def job(item: tuple[AblationCell, int]) -> MetricReport:
            return self._run_one(item[0], item[1], train_set, test_set)

        with ThreadPoolExecutor(max_workers=self.config.threads) as pool:
            reports = list(
                tqdm(pool.map(job, jobs), total=len(jobs), desc="ablate", unit="run", disable=not self._progress)
            )

        results = []
        for k, cell in enumerate(cells):
            per_seed = reports[k * len(seeds) : (k + 1) * len(seeds)]
            results.append(
                CellResult(
                    cell=cell,
                    train=self.config.train,
                    seeds=list(seeds),
                    per_seed=per_seed,
                    mpjpe=statistics.median(r.mpjpe for r in per_seed),
                    pa_mpjpe=statistics.median(r.pa_mpjpe for r in per_seed),
                    pck=statistics.median(r.pck for r in per_seed),
                )
            )
        baseline = score([scene.poses for scene in test_set], test_set, self.config.model.root_index)

        self._write_outputs(out, results, baseline)
        self._write_resolved_config(out)
        print(render_ablation(results, baseline), end="")
        return 0

    def _write_outputs(self, out: Path, results: list[CellResult], baseline: MetricReport) -> None:
        try:
            for result in results:
                cell_dir = out / "cells" / result.cell.name
                cell_dir.mkdir(parents=True, exist_ok=True)
                archived = {
                    "model": result.cell.model.model_dump(mode="json"),
                    "train": result.train.model_dump(mode="json"),
                    "seeds": result.seeds,
                    "context_free": result.cell.context_free,
                }
                (cell_dir / "config.yaml").write_text(yaml.safe_dump(archived, sort_keys=False), encoding="utf-8")
                (cell_dir / "metrics.json").write_text(result.model_dump_json(indent=2) + "\n", encoding="utf-8")
            payload = {
                "input": baseline.model_dump(mode="json"),
                "cells": [r.model_dump(mode="json") for r in results],
            }
            (out / ABLATION_NAME).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
            (out / ABLATION_TABLE_NAME).write_text(render_ablation(results, baseline), encoding="utf-8")
        except OSError as e:
            raise DataIOError(out, str(e)) from e


def render_ablation(results: list[CellResult], baseline: MetricReport) -> str:
    def yes(flag: bool) -> str:
        return "yes" if flag else "no"

    header = ["cell", "order", "attention", "bidirectional", "GRU layers", "# Par.", "MPJPE", "PA-MPJPE", "3DPCK"]
    rows = [["input (unrefined)", "-", "-", "-", "-", "-", f"{baseline.mpjpe:.2f}", f"{baseline.pa_mpjpe:.2f}", f"{baseline.pck:.2f}"]]
    for r in results:
        c = r.cell
        rows.append(
            [
                c.name,
                "-" if c.context_free else c.order,
                yes(c.use_attention),
                yes(c.bidirectional),
                str(c.gru_layers),
                f"{c.param_count / 1e6:.2f}M",
                f"{r.mpjpe:.2f}",
                f"{r.pa_mpjpe:.2f}",
                f"{r.pck:.2f}",
            ]
        )
    return format_table(header, rows) + "\n"


__all__ = [
    "ABLATION_NAME",
    "ABLATION_TABLE_NAME",
    "AblationCell",
    "CellResult",
    "cell_name",
    "score",
    "AblateCommand",
    "render_ablation",
]
