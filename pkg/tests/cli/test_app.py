import json

import numpy as np
import pytest

from pinet_refine.cli import main
from pinet_refine.model import ForwardResult, PiNet, load_checkpoint
from pinet_refine.model import verification
from pinet_refine.model.verification import GradCheckCase, linear_case
from pinet_refine.skeleton import read_scenes, write_scenes

from tests.cli.conftest import SMALL_MODEL
from tests.conftest import random_scene


def test_gen(data_dir):
    for name in ("train.json", "test.json", "manifest.json", "resolved_config.yaml"):
        assert (data_dir / name).exists()
    assert len(read_scenes(data_dir / "train.json").scenes) == 4
    assert json.loads((data_dir / "manifest.json").read_text())["gen"]["seed"] == 3


def test_train_writes_checkpoint_and_log(run_dir):
    ckpt = load_checkpoint(run_dir / "checkpoint.pinet")
    assert ckpt.config.hidden_size == 4
    assert ckpt.header.train_config.epochs == 1
    (record,) = [json.loads(line) for line in (run_dir / "train_log.jsonl").read_text().splitlines()]
    assert record["epoch"] == 1
    assert (run_dir / "resolved_config.yaml").exists()


def test_train_zero_epochs(tmp_path, data_dir):
    out = tmp_path / "zero"
    assert main(["train", str(data_dir), "--out", str(out), *SMALL_MODEL, "--set", "train.epochs=0"]) == 0
    assert load_checkpoint(out / "checkpoint.pinet").header.step == 0
    assert (out / "train_log.jsonl").read_text() == ""


def test_refine_keeps_ids_and_gt(tmp_path, data_dir, run_dir):
    out = tmp_path / "refined" / "test_refined.json"
    argv = ["refine", str(run_dir / "checkpoint.pinet"), str(data_dir / "test.json"), "--out", str(out)]
    assert main([*argv, "--dump-attention", "--quiet"]) == 0

    source = read_scenes(data_dir / "test.json").scenes
    refined = read_scenes(out).scenes
    assert len(refined) == len(source)
    for a, b in zip(source, refined):
        assert a.ids == b.ids
        assert all(np.array_equal(p.joints, q.joints) for p, q in zip(a.gt, b.gt))

    maps = json.loads((out.parent / "attention.json").read_text())
    assert len(maps) == sum(scene.num_persons for scene in source)
    assert np.allclose(np.sum(maps[0]["weights"], axis=1), 1.0)


def test_refine_empty_file(tmp_path, run_dir):
    empty = tmp_path / "empty.json"
    write_scenes(empty, [], 17)
    out = tmp_path / "empty_refined.json"
    assert main(["refine", str(run_dir / "checkpoint.pinet"), str(empty), "--out", str(out), "--quiet"]) == 0
    assert read_scenes(out).scenes == []


def test_refine_joint_count_mismatch(tmp_path, rng, run_dir):
    scenes = tmp_path / "four_joints.json"
    write_scenes(scenes, [random_scene(rng, 2, num_joints=4)], 4)
    argv = ["refine", str(run_dir / "checkpoint.pinet"), str(scenes), "--out", str(tmp_path / "x.json")]
    assert main([*argv, "--quiet"]) == 5


def test_eval_with_input_baseline(tmp_path, data_dir, run_dir):
    refined = tmp_path / "refined.json"
    assert main(["refine", str(run_dir / "checkpoint.pinet"), str(data_dir / "test.json"), "--out", str(refined), "--quiet"]) == 0
    report_dir = tmp_path / "report"
    assert main(["eval", str(refined), "--gt", str(data_dir / "test.json"), "--out", str(report_dir), "--quiet"]) == 0

    report = json.loads((report_dir / "report.json").read_text())
    assert report["input"] is not None
    assert report["delta"]["mpjpe"] == pytest.approx(report["refined"]["mpjpe"] - report["input"]["mpjpe"])
    assert (report_dir / "report.txt").exists()
    assert (report_dir / "report.schema.json").exists()


def test_eval_own_ground_truth(tmp_path, data_dir):
    assert main(["eval", str(data_dir / "train.json"), "--out", str(tmp_path / "r"), "--quiet"]) == 0
    report = json.loads((tmp_path / "r" / "report.json").read_text())
    assert report["input"] is None
    assert 0 <= report["refined"]["pck"] <= 100


def test_eval_without_ground_truth(tmp_path, rng):
    bare = write_scenes(tmp_path / "bare.json", [random_scene(rng, 2, with_gt=False)], 17)
    assert main(["eval", str(bare), "--out", str(tmp_path / "r"), "--quiet"]) == 3
    assert not (tmp_path / "r" / "report.json").exists()


def test_eval_count_mismatch(tmp_path, data_dir):
    argv = ["eval", str(data_dir / "test.json"), "--gt", str(data_dir / "train.json"), "--out", str(tmp_path / "r")]
    assert main([*argv, "--quiet"]) == 6


def test_invalid_config(tmp_path):
    assert main(["gen", "--out", str(tmp_path / "d"), "--set", "gen.n_scenes=0", "--quiet"]) == 2
    config = tmp_path / "run.yaml"
    config.write_text("gen:\n  n_scenes: 4\n  persons_min: -2\n", encoding="utf-8")
    assert main(["gen", "--out", str(tmp_path / "d"), "--config", str(config), "--quiet"]) == 2


def test_missing_input(tmp_path):
    assert main(["eval", str(tmp_path / "absent.json"), "--out", str(tmp_path / "r"), "--quiet"]) == 3


def test_undecodable_files(tmp_path):
    garbled = tmp_path / "garbled.json"
    garbled.write_bytes(b'{"num_joints": 17, "scenes": [\xff]}')
    assert main(["eval", str(garbled), "--out", str(tmp_path / "r"), "--quiet"]) == 3
    config = tmp_path / "run.yaml"
    config.write_bytes(b"gen:\n  n_scenes: \xff\n")
    assert main(["gen", "--out", str(tmp_path / "d"), "--config", str(config), "--quiet"]) == 3


def test_non_finite_loss(monkeypatch, tmp_path, data_dir):
    def broken(self, scene, n, backward=False):
        return ForwardResult(refined=scene.poses, loss=float("inf"), ordering=self.ordering(scene, n))

    monkeypatch.setattr(PiNet, "forward_train", broken)
    assert main(["train", str(data_dir), "--out", str(tmp_path / "run"), *SMALL_MODEL]) == 4


GRADCHECK_FAST = ["--set", "gradcheck.n_coords=10", "--set", "gradcheck.seeds=[0]", "--quiet"]


def test_gradcheck(tmp_path):
    assert main(["gradcheck", "--out", str(tmp_path), *GRADCHECK_FAST]) == 0
    payload = json.loads((tmp_path / "gradcheck.json").read_text())
    components = {r["component"] for r in payload["reports"]}
    assert {"linear", "gru_cell", "attention", "pinet"} <= components


def test_gradcheck_default_settings(tmp_path):
    assert main(["gradcheck", "--out", str(tmp_path), "--quiet"]) == 0
    payload = json.loads((tmp_path / "gradcheck.json").read_text())
    assert all(r["max_rel_error"] < 1e-5 for r in payload["reports"])


def test_gradcheck_failure(monkeypatch, tmp_path):
    def skewed_linear(seed: int) -> GradCheckCase:
        case = linear_case(seed)
        honest = case.loss

        def loss(store, backward=False):
            value = honest(store, backward=backward)
            if backward:
                store["W"].grad *= 2.0
            return value

        return GradCheckCase("linear", loss, case.store)

    monkeypatch.setattr(verification, "PRIMITIVE_CASES", (skewed_linear,))
    assert main(["gradcheck", "--out", str(tmp_path), *GRADCHECK_FAST]) == 7


def test_ablate(tmp_path, data_dir):
    axes = [
        "--set", "ablate.orders=[intuitive]",
        "--set", "ablate.attention=[true]",
        "--set", "ablate.bidirectional=[true]",
        "--set", "ablate.gru_layers=[1]",
        "--set", "ablate.seeds=[0]",
    ]  # fmt: skip
    out = tmp_path / "ablation"
    assert main(["ablate", str(data_dir), "--out", str(out), *SMALL_MODEL, *axes]) == 0

    payload = json.loads((out / "ablation.json").read_text())
    assert [c["cell"]["name"] for c in payload["cells"]] == ["intuitive-att-bi-l1", "context_free"]
    assert (out / "cells" / "context_free" / "metrics.json").exists()
    assert (out / "cells" / "intuitive-att-bi-l1" / "config.yaml").exists()
    assert "input (unrefined)" in (out / "ablation.txt").read_text()
