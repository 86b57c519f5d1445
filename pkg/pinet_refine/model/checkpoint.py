"""
Checkpoint file:

    magic (8 bytes) | format version (u32) | header length (u64) | header JSON
    | tensor count (u32) | per tensor: name length (u16), name (utf-8),
      ndim (u8), dims (u32 each), little-endian float64 data

All integers little-endian. The header holds the model config, the train
config, the PRNG seed/algorithm and the step counter; the normalization
statistics travel as tensors so they restore bit-exactly.
"""

import io
import json
import struct
from pathlib import Path
from typing import Optional, Union

import numpy as np
from pydantic import ValidationError

from pinet_refine.base import BaseModel
from pinet_refine.exception import CheckpointFormatError, DataIOError
from pinet_refine.nn import PRNG_ALGORITHM, Param, ParameterStore, TrainConfig
from pinet_refine.skeleton import NormStats
from .config import ModelConfig
from .network import PiNet, param_specs

MAGIC = b"PINETCKP"
FORMAT_VERSION = 1

_STATS_MEAN = "__stats__.mean"
_STATS_STD = "__stats__.std"


class CheckpointHeader(BaseModel):
    format_version: int = FORMAT_VERSION
    config: ModelConfig
    train_config: Optional[TrainConfig] = None
    seed: int
    prng_algorithm: str = PRNG_ALGORITHM
    step: int = 0


class Checkpoint(BaseModel):
    header: CheckpointHeader
    stats: NormStats
    params: ParameterStore

    @property
    def config(self) -> ModelConfig:
        return self.header.config

    def model(self) -> PiNet:
        return PiNet(self.header.config, self.params, self.stats)

    def equals(self, other: "Checkpoint") -> bool:
        """Bitwise equality of header, statistics and every parameter."""
        return (
            self.header == other.header
            and np.array_equal(self.stats.mean, other.stats.mean)
            and np.array_equal(self.stats.std, other.stats.std)
            and self.params.equals(other.params)
        )


def _write_tensor(buf: io.BytesIO, name: str, value: np.ndarray) -> None:
    encoded = name.encode("utf-8")
    buf.write(struct.pack("<H", len(encoded)))
    buf.write(encoded)
    buf.write(struct.pack("<B", value.ndim))
    buf.write(struct.pack(f"<{value.ndim}I", *value.shape))
    buf.write(np.ascontiguousarray(value, dtype="<f8").tobytes())


def _read_exact(buf: io.BytesIO, size: int) -> bytes:
    data = buf.read(size)
    if len(data) != size:
        raise CheckpointFormatError("checkpoint is truncated")
    return data


def _read_tensor(buf: io.BytesIO) -> tuple[str, np.ndarray]:
    (name_len,) = struct.unpack("<H", _read_exact(buf, 2))
    try:
        name = _read_exact(buf, name_len).decode("utf-8")
    except UnicodeDecodeError as e:
        raise CheckpointFormatError(f"tensor name is not valid UTF-8: {e.reason}") from e
    (ndim,) = struct.unpack("<B", _read_exact(buf, 1))
    shape = struct.unpack(f"<{ndim}I", _read_exact(buf, 4 * ndim))
    count = int(np.prod(shape)) if ndim else 1
    data = np.frombuffer(_read_exact(buf, 8 * count), dtype="<f8").astype(np.float64)
    return name, data.reshape(shape)


def checkpoint_to_bytes(ckpt: Checkpoint) -> bytes:
    buf = io.BytesIO()
    header = ckpt.header.model_dump_json().encode("utf-8")
    buf.write(MAGIC)
    buf.write(struct.pack("<I", ckpt.header.format_version))
    buf.write(struct.pack("<Q", len(header)))
    buf.write(header)
    buf.write(struct.pack("<I", len(ckpt.params) + 2))
    _write_tensor(buf, _STATS_MEAN, ckpt.stats.mean)
    _write_tensor(buf, _STATS_STD, ckpt.stats.std)
    for param in ckpt.params:
        _write_tensor(buf, param.name, param.value)
    return buf.getvalue()


def checkpoint_from_bytes(data: bytes) -> Checkpoint:
    """
    Decode a checkpoint.

    Raises:
        CheckpointFormatError: bad magic, unsupported version, or tensors whose
            names/shapes disagree with the stored model config.
    """
    buf = io.BytesIO(data)
    if _read_exact(buf, len(MAGIC)) != MAGIC:
        raise CheckpointFormatError("not a checkpoint file (bad magic bytes)")
    (version,) = struct.unpack("<I", _read_exact(buf, 4))
    if version != FORMAT_VERSION:
        raise CheckpointFormatError(f"unsupported checkpoint version {version} (expected {FORMAT_VERSION})")
    (header_len,) = struct.unpack("<Q", _read_exact(buf, 8))
    try:
        header = CheckpointHeader.model_validate_json(_read_exact(buf, header_len))
    except ValidationError as e:
        raise CheckpointFormatError(f"invalid checkpoint header: {e}") from e

    (count,) = struct.unpack("<I", _read_exact(buf, 4))
    tensors = dict(_read_tensor(buf) for _ in range(count))
    if buf.read(1):
        raise CheckpointFormatError("trailing bytes after the last tensor")

    try:
        stats = NormStats(mean=tensors.pop(_STATS_MEAN), std=tensors.pop(_STATS_STD))
    except (KeyError, ValidationError) as e:
        raise CheckpointFormatError("missing or invalid normalization statistics") from e

    specs = param_specs(header.config)
    expected = [spec.name for spec in specs]
    if sorted(tensors) != sorted(expected):
        raise CheckpointFormatError(
            f"tensor names do not match the model config: {sorted(set(tensors) ^ set(expected))}"
        )
    store = ParameterStore()
    for spec in specs:
        value = tensors[spec.name]
        if value.shape != spec.shape:
            raise CheckpointFormatError(
                f"{spec.name}: stored shape {value.shape}, config expects {spec.shape}"
            )
        store.add(Param(spec.name, value))
    return Checkpoint(header=header, stats=stats, params=store)


def save_checkpoint(path: Union[str, Path], ckpt: Checkpoint) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(checkpoint_to_bytes(ckpt))
    except OSError as e:
        raise DataIOError(path, str(e)) from e
    return path


def load_checkpoint(path: Union[str, Path]) -> Checkpoint:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise DataIOError(path, str(e)) from e
    return checkpoint_from_bytes(data)


__all__ = [
    "MAGIC",
    "FORMAT_VERSION",
    "CheckpointHeader",
    "Checkpoint",
    "checkpoint_to_bytes",
    "checkpoint_from_bytes",
    "save_checkpoint",
    "load_checkpoint",
]
