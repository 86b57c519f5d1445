from .config import ModelConfig
from .attention import (
    AttentionParams,
    attention_weights,
    apply_attention,
)
from .head import MlpHead, head
from .network import (
    ForwardResult,
    PiNet,
    param_specs,
    param_count,
    init_params,
    encode_pose,
    input_stats,
    refine_dataset,
)
from .checkpoint import (
    FORMAT_VERSION,
    CheckpointHeader,
    Checkpoint,
    checkpoint_to_bytes,
    checkpoint_from_bytes,
    save_checkpoint,
    load_checkpoint,
)
from .trainer import EpochRecord, TrainResult, training_stats, train
from .verification import (
    GradCheckSettings,
    GradCheckCase,
    PRIMITIVE_CASES,
    gradcheck_cases,
    run_gradcheck,
)

__all__ = [
    "ModelConfig",
    "AttentionParams",
    "attention_weights",
    "apply_attention",
    "MlpHead",
    "head",
    "ForwardResult",
    "PiNet",
    "param_specs",
    "param_count",
    "init_params",
    "encode_pose",
    "input_stats",
    "refine_dataset",
    "FORMAT_VERSION",
    "CheckpointHeader",
    "Checkpoint",
    "checkpoint_to_bytes",
    "checkpoint_from_bytes",
    "save_checkpoint",
    "load_checkpoint",
    "EpochRecord",
    "TrainResult",
    "training_stats",
    "train",
    "GradCheckSettings",
    "GradCheckCase",
    "PRIMITIVE_CASES",
    "gradcheck_cases",
    "run_gradcheck",
]
