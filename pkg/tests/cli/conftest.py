import os
from pathlib import Path

import pytest

from pinet_refine.cli import main

SMALL_MODEL = [
    "--set", "model.hidden_size=4",
    "--set", "model.gru_layers=1",
    "--set", "model.mlp_hidden=[6, 5]",
    "--set", "train.lr_init=0.001",
    "--set", "train.lr_final=0.000001",
    "--set", "train.epochs=1",
    "--quiet",
]  # fmt: skip


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for name in list(os.environ):
        if name.startswith("PINET_"):
            monkeypatch.delenv(name)


@pytest.fixture
def data_dir(tmp_path) -> Path:
    out = tmp_path / "data"
    assert main(["gen", "--out", str(out), "--set", "gen.n_scenes=5", "--seed", "3", "--quiet"]) == 0
    return out


@pytest.fixture
def run_dir(tmp_path, data_dir) -> Path:
    out = tmp_path / "run"
    assert main(["train", str(data_dir), "--out", str(out), *SMALL_MODEL]) == 0
    return out
