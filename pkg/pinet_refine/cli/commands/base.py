import logging
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Type, TypeVar, Union

from pydantic import BaseModel, ValidationError

from pinet_refine.exception import InvalidConfigError, JointCountMismatchError
from pinet_refine.skeleton import SceneFile, read_scenes
from ..config import RunConfig, write_resolved_config

logger = logging.getLogger(__name__)

T = TypeVar("T", bound=BaseModel)


class BaseCommand(ABC):
    name: str = ""

    def __init__(self, config: RunConfig, progress: bool = False):
        self._config = config
        self._progress = progress

    @property
    def config(self) -> RunConfig:
        return self._config

    def _validate_config(self, raw_config: dict[str, Any], pydantic_model: Type[T]) -> T:
        try:
            return pydantic_model.model_validate(raw_config)
        except ValidationError as e:
            raise InvalidConfigError(raw_config=raw_config, reason=str(e)) from e

    def _write_resolved_config(self, out_dir: Union[str, Path]) -> Path:
        path = write_resolved_config(out_dir, self._config)
        logger.debug("%s: resolved config written to %s", self.name, path)
        return path

    def _read_scenes(self, path: Union[str, Path], num_joints: int | None = None) -> SceneFile:
        scene_file = read_scenes(path)
        if num_joints is not None and scene_file.num_joints != num_joints:
            raise JointCountMismatchError(num_joints, scene_file.num_joints, where=str(path))
        return scene_file

    @abstractmethod
    def run(self, *args: Any, **kwargs: Any) -> int:
        """Executes the command; returns the process exit code."""


__all__ = [
    "BaseCommand",
]
