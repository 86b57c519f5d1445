"""
Run configuration.

Resolution order, later wins:

    defaults < YAML file < PINET_* environment < --set key.path=value < flags

Environment keys use `__` between sections (PINET_TRAIN__EPOCHS=3); values
from the environment and from --set are parsed as YAML scalars/lists. Errors
name the 1-based line of the offending key when it comes from the file.
"""

import copy
import logging
import os
from pathlib import Path
from typing import Any, Iterable, Mapping, Optional, Union

import yaml
from pydantic import Field, ValidationError

from pinet_refine.base import BaseModel
from pinet_refine.exception import DataIOError, InvalidConfigError
from pinet_refine.model import GradCheckSettings, ModelConfig
from pinet_refine.nn import TrainConfig
from pinet_refine.skeleton import OrderStrategy
from pinet_refine.synthdata import GenConfig, NoiseConfig

logger = logging.getLogger(__name__)

ENV_PREFIX = "PINET_"
ENV_SEPARATOR = "__"
RESOLVED_CONFIG_NAME = "resolved_config.yaml"


class AblateConfig(BaseModel):
    """Axes of the ablation matrix; every cell is trained once per seed."""

    orders: list[OrderStrategy] = Field(default_factory=lambda: ["intuitive", "reverse", "random"], min_length=1)
    attention: list[bool] = Field(default_factory=lambda: [True, False], min_length=1)
    bidirectional: list[bool] = Field(default_factory=lambda: [True, False], min_length=1)
    gru_layers: list[int] = Field(default_factory=lambda: [2, 3, 4], min_length=1)
    seeds: list[int] = Field(default_factory=lambda: [0, 1, 2, 3, 4], min_length=1)
    context_free: bool = True


class RunConfig(BaseModel):
    model: ModelConfig = Field(default_factory=ModelConfig)
    train: TrainConfig = Field(default_factory=TrainConfig)
    gen: GenConfig = Field(default_factory=GenConfig)
    noise: NoiseConfig = Field(default_factory=NoiseConfig)
    gradcheck: GradCheckSettings = Field(default_factory=GradCheckSettings)
    ablate: AblateConfig = Field(default_factory=AblateConfig)
    seed: Optional[int] = Field(default=None, ge=0, description="overrides gen.seed and train.seed")
    threads: int = Field(default=1, ge=1)


def _key_lines(node: yaml.Node, prefix: tuple = ()) -> dict[tuple, int]:
    """1-based line of every mapping key in a composed YAML tree, by key path."""
    lines: dict[tuple, int] = {}
    if isinstance(node, yaml.MappingNode):
        for key, value in node.value:
            path = prefix + (key.value,)
            lines[path] = key.start_mark.line + 1
            lines.update(_key_lines(value, path))
    elif isinstance(node, yaml.SequenceNode):
        for k, item in enumerate(node.value):
            path = prefix + (k,)
            lines[path] = item.start_mark.line + 1
            lines.update(_key_lines(item, path))
    return lines


def parse_config_text(text: str) -> tuple[dict[str, Any], dict[tuple, int]]:
    """YAML document -> (mapping, key-path lines). Syntax errors carry their line."""
    try:
        raw = yaml.safe_load(text)
        root = yaml.compose(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        raise InvalidConfigError(text, reason=str(getattr(e, "problem", None) or e), line=line) from e
    if raw is None:
        return {}, {}
    if not isinstance(raw, dict):
        raise InvalidConfigError(text, reason="top level of a run config must be a mapping", line=1)
    return raw, _key_lines(root) if root is not None else {}


def _set_path(target: dict, path: list[str], value: Any, source: str) -> None:
    node = target
    for key in path[:-1]:
        child = node.setdefault(key, {})
        if not isinstance(child, dict):
            raise InvalidConfigError(target, reason=f"{source}: {key!r} is not a section")
        node = child
    node[path[-1]] = value


def _parse_value(text: str, source: str) -> Any:
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise InvalidConfigError(text, reason=f"{source}: cannot parse value {text!r}") from e


def env_overrides(env: Mapping[str, str]) -> list[tuple[list[str], str]]:
    """(key path, raw value) for every PINET_* variable, sorted by name."""
    out = []
    for name in sorted(env):
        if name.startswith(ENV_PREFIX) and len(name) > len(ENV_PREFIX):
            path = name[len(ENV_PREFIX) :].lower().split(ENV_SEPARATOR)
            out.append((path, env[name]))
    return out


def _line_for(loc: tuple, lines: dict[tuple, int]) -> Optional[int]:
    for k in range(len(loc), 0, -1):
        if loc[:k] in lines:
            return lines[loc[:k]]
    return None


def resolve_run_config(
    raw: Optional[dict[str, Any]] = None,
    lines: Optional[dict[tuple, int]] = None,
    overrides: Iterable[str] = (),
    env: Optional[Mapping[str, str]] = None,
    seed: Optional[int] = None,
    threads: Optional[int] = None,
) -> RunConfig:
    """
    Layers environment, --set overrides and flags over a parsed file and validates.

    Args:
        raw: (Optional[dict]) the parsed YAML mapping.
        lines: (Optional[dict]) key-path lines of `raw`, for error locations.
        overrides: (Iterable[str]) `section.key=value` strings.
        env: (Optional[Mapping]) environment; only PINET_* entries are read.
        seed: (Optional[int]) the --seed flag.
        threads: (Optional[int]) the --threads flag.

    Returns:
        RunConfig: validated configuration with the top-level seed pushed
        into gen.seed and train.seed.
    """
    merged = copy.deepcopy(raw or {})
    lines = lines or {}
    for path, value in env_overrides(env or {}):
        _set_path(merged, path, _parse_value(value, "environment"), "environment")
    for item in overrides:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise InvalidConfigError(item, reason=f"--set expects key.path=value, got {item!r}")
        _set_path(merged, key.strip().split("."), _parse_value(value, f"--set {key}"), "--set")
    if seed is not None:
        merged["seed"] = seed
    if threads is not None:
        merged["threads"] = threads

    try:
        config = RunConfig.model_validate(merged)
    except ValidationError as e:
        first = e.errors()[0]
        loc = tuple(first["loc"])
        where = ".".join(str(p) for p in loc)
        raise InvalidConfigError(merged, reason=f"{where}: {first['msg']}", line=_line_for(loc, lines)) from e

    if config.seed is not None:
        config.gen = config.gen.model_copy(update={"seed": config.seed})
        config.train = config.train.model_copy(update={"seed": config.seed})
    return config


def load_run_config(
    path: Optional[Union[str, Path]] = None,
    overrides: Iterable[str] = (),
    env: Optional[Mapping[str, str]] = None,
    seed: Optional[int] = None,
    threads: Optional[int] = None,
) -> RunConfig:
    raw: dict[str, Any] = {}
    lines: dict[tuple, int] = {}
    if path is not None:
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise DataIOError(path, str(e)) from e
        except UnicodeDecodeError as e:
            raise DataIOError(path, f"not valid UTF-8 ({e.reason} at byte {e.start})") from e
        raw, lines = parse_config_text(text)
        logger.debug("loaded run config from %s", path)
    return resolve_run_config(
        raw,
        lines,
        overrides=overrides,
        env=os.environ if env is None else env,
        seed=seed,
        threads=threads,
    )


def dump_run_config(config: RunConfig) -> str:
    return yaml.safe_dump(config.model_dump(mode="json"), sort_keys=False)


def write_resolved_config(out_dir: Union[str, Path], config: RunConfig) -> Path:
    path = Path(out_dir) / RESOLVED_CONFIG_NAME
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(dump_run_config(config), encoding="utf-8")
    except OSError as e:
        raise DataIOError(path, str(e)) from e
    return path


__all__ = [
    "ENV_PREFIX",
    "RESOLVED_CONFIG_NAME",
    "AblateConfig",
    "RunConfig",
    "parse_config_text",
    "env_overrides",
    "resolve_run_config",
    "load_run_config",
    "dump_run_config",
    "write_resolved_config",
]
