import pytest

from pinet_refine.cli.config import (
    RunConfig,
    env_overrides,
    load_run_config,
    parse_config_text,
    resolve_run_config,
    write_resolved_config,
)
from pinet_refine.exception import DataIOError, InvalidConfigError

CONFIG_TEXT = """\
model:
  hidden_size: 32
  order: reverse
train:
  epochs: 3
  lr_init: 0.001
"""


def test_defaults():
    config = resolve_run_config()
    assert config == RunConfig()
    assert config.seed is None
    assert config.train.lr_init == 1e-5
    assert config.model.hidden_size == 256


def test_precedence():
    raw, lines = parse_config_text(CONFIG_TEXT)
    config = resolve_run_config(raw, lines)
    assert config.train.epochs == 3
    assert config.model.order == "reverse"

    env = {"PINET_TRAIN__EPOCHS": "5", "HOME": "/root"}
    assert resolve_run_config(raw, lines, env=env).train.epochs == 5

    config = resolve_run_config(raw, lines, overrides=["train.epochs=7"], env=env)
    assert config.train.epochs == 7

    config = resolve_run_config(raw, lines, seed=42, threads=3)
    assert (config.seed, config.gen.seed, config.train.seed, config.threads) == (42, 42, 42, 3)


def test_env_overrides():
    env = {"PINET_MODEL__ORDER": "random", "PINET_THREADS": "2", "PINET_": "x", "OTHER": "1"}
    assert env_overrides(env) == [(["model", "order"], "random"), (["threads"], "2")]
    config = resolve_run_config(env=env)
    assert config.model.order == "random"
    assert config.threads == 2


def test_overrides_parse_yaml_values():
    config = resolve_run_config(overrides=["model.mlp_hidden=[16, 8]", "model.use_attention=false"])
    assert config.model.mlp_hidden == (16, 8)
    assert config.model.use_attention is False


def test_errors_name_the_line():
    raw, lines = parse_config_text(CONFIG_TEXT.replace("epochs: 3", "epochs: -1"))
    with pytest.raises(InvalidConfigError) as excinfo:
        resolve_run_config(raw, lines)
    assert excinfo.value.line == 5
    assert "line 5" in str(excinfo.value)
    assert excinfo.value.exit_code == 2

    raw, lines = parse_config_text("model:\n  hidden_sise: 4\n")
    with pytest.raises(InvalidConfigError) as excinfo:
        resolve_run_config(raw, lines)
    assert excinfo.value.line == 2


def test_malformed_documents():
    with pytest.raises(InvalidConfigError) as excinfo:
        parse_config_text("model: [1, 2\ntrain: {}\n")
    assert excinfo.value.line is not None
    with pytest.raises(InvalidConfigError) as excinfo:
        parse_config_text("- 1\n- 2\n")
    assert excinfo.value.line == 1
    assert parse_config_text("") == ({}, {})


def test_bad_overrides():
    with pytest.raises(InvalidConfigError):
        resolve_run_config(overrides=["train.epochs"])
    with pytest.raises(InvalidConfigError):
        resolve_run_config(overrides=["train.epochs.deeper=1"], raw={"train": {"epochs": 2}})
    with pytest.raises(InvalidConfigError):
        resolve_run_config(overrides=["threads=0"])


def test_resolved_config_round_trip(tmp_path):
    raw, lines = parse_config_text(CONFIG_TEXT)
    config = resolve_run_config(raw, lines, seed=9)
    path = write_resolved_config(tmp_path, config)
    assert path.name == "resolved_config.yaml"
    assert load_run_config(path, env={}) == config


def test_missing_file(tmp_path):
    with pytest.raises(DataIOError):
        load_run_config(tmp_path / "absent.yaml", env={})


def test_file_that_is_not_utf8(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_bytes("train:\n  epochs: 3  # \xe9poques\n".encode("latin-1"))
    with pytest.raises(DataIOError, match="UTF-8"):
        load_run_config(path, env={})
