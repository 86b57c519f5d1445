from typing import Any, Optional, Union

from pydantic import BaseModel


class PiNetError(Exception):
    """Root of every error raised by the package. `exit_code` is what the CLI returns."""

    exit_code: int = 1


class InvalidConfigError(PiNetError):
    exit_code = 2

    def __init__(
        self,
        raw_config: Union[dict, BaseModel, str],
        reason: str = "",
        line: Optional[int] = None,
    ):
        # Convert the raw_config to a dictionary if it's a BaseModel instance
        if isinstance(raw_config, BaseModel):
            raw_config = raw_config.model_dump()

        location = f" (line {line})" if line is not None else ""
        error_message = f"Invalid Config{location}: {reason or raw_config}"
        super().__init__(error_message)

        self.raw_config = raw_config
        self.reason = reason
        self.line = line


class DataIOError(PiNetError):
    exit_code = 3

    def __init__(self, path: Any, reason: str = ""):
        super().__init__(f"I/O failure on {path}: {reason}")
        self.path = path


class SceneFormatError(PiNetError):
    exit_code = 3

    def __init__(self, reason: str, line: Optional[int] = None, path: Any = None):
        prefix = [str(p) for p in (path, line) if p is not None]
        super().__init__(": ".join([":".join(prefix), reason]) if prefix else reason)
        self.reason = reason
        self.line = line
        self.path = path


class NonFiniteLossError(PiNetError):
    exit_code = 4

    def __init__(self, scene_index: int, loss: float):
        super().__init__(f"Non-finite loss {loss!r} on training scene {scene_index}")
        self.scene_index = scene_index
        self.loss = loss


class JointCountMismatchError(PiNetError):
    exit_code = 5

    def __init__(self, expected: int, got: int, where: str = ""):
        suffix = f" in {where}" if where else ""
        super().__init__(f"Expected {expected} joints, got {got}{suffix}")
        self.expected = expected
        self.got = got


class CountMismatchError(PiNetError):
    exit_code = 6

    def __init__(self, expected: int, got: int, what: str = "items"):
        super().__init__(f"Count mismatch for {what}: expected {expected}, got {got}")
        self.expected = expected
        self.got = got


class GradCheckFailedError(PiNetError):
    exit_code = 7

    def __init__(self, component: str, coordinate: str, error: float):
        super().__init__(
            f"Gradient check failed for {component}: relative error {error:.3e} at {coordinate}"
        )
        self.component = component
        self.coordinate = coordinate
        self.error = error


class ShapeMismatchError(PiNetError, ValueError):
    pass


class EmptyInputError(PiNetError, ValueError):
    pass


class IndexOutOfRangeError(PiNetError, IndexError):
    pass


class NonFiniteGradientError(PiNetError, FloatingPointError):
    def __init__(self, param_name: str):
        super().__init__(f"Non-finite gradient in parameter {param_name!r}; step aborted")
        self.param_name = param_name


class NonFiniteValueError(PiNetError, FloatingPointError):
    pass


class DegeneratePointSetError(PiNetError, ValueError):
    def __init__(self, rank: int):
        super().__init__(f"Point set is degenerate (rank {rank} < 2); alignment undefined")
        self.rank = rank


class CheckpointFormatError(PiNetError):
    exit_code = 3


class MissingGroundTruthError(PiNetError, ValueError):
    exit_code = 3


__all__ = [
    "PiNetError",
    "InvalidConfigError",
    "DataIOError",
    "SceneFormatError",
    "NonFiniteLossError",
    "JointCountMismatchError",
    "CountMismatchError",
    "GradCheckFailedError",
    "ShapeMismatchError",
    "EmptyInputError",
    "IndexOutOfRangeError",
    "NonFiniteGradientError",
    "NonFiniteValueError",
    "DegeneratePointSetError",
    "CheckpointFormatError",
    "MissingGroundTruthError",
]
