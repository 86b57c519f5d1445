import logging
import math

import numpy as np
from pydantic import Field, model_validator

from pinet_refine.base import BaseModel
from pinet_refine.exception import NonFiniteGradientError
from .params import ParameterStore

logger = logging.getLogger(__name__)


class TrainConfig(BaseModel):
    """Optimizer and schedule settings. Defaults are the published training recipe."""

    lr_init: float = Field(default=1e-5, gt=0)
    lr_final: float = Field(default=1e-8, gt=0)
    power: float = Field(default=0.9, gt=0)
    epochs: int = Field(default=25, ge=0)
    batch_size: int = Field(default=4, ge=1)
    beta1: float = Field(default=0.9, ge=0, lt=1)
    beta2: float = Field(default=0.999, ge=0, lt=1)
    adam_eps: float = Field(default=1e-8, gt=0)
    seed: int = 0

    @model_validator(mode="after")
    def _check_lr(self) -> "TrainConfig":
        if self.lr_final > self.lr_init:
            raise ValueError(f"lr_final ({self.lr_final}) must not exceed lr_init ({self.lr_init})")
        return self


def poly_lr(step: int, total_steps: int, cfg: TrainConfig) -> float:
    """
    Poly learning-rate policy, clamped below at `lr_final`.

    Args:
        step: (int) optimizer steps taken so far, 0 <= step <= total_steps.
        total_steps: (int) optimizer steps of the whole run, >= 1.
        cfg: (TrainConfig) supplies lr_init, lr_final and power.

    Returns:
        float: max(lr_final, lr_init * (1 - step / total_steps) ** power)
    """
    if total_steps < 1 or not 0 <= step <= total_steps:
        raise ValueError(f"poly_lr: need 0 <= step ({step}) <= total_steps ({total_steps}), total_steps >= 1")
    return max(cfg.lr_final, cfg.lr_init * (1.0 - step / total_steps) ** cfg.power)


def adam_step(params: ParameterStore, lr: float, t: int, cfg: TrainConfig) -> ParameterStore:
    """
    One bias-corrected Adam update in place, then zero the gradients.

    Raises:
        NonFiniteGradientError: if any gradient holds NaN/Inf; nothing is updated.
    """
    if t < 1:
        raise ValueError(f"adam_step: t must be >= 1, got {t}")
    for param in params:
        if not np.all(np.isfinite(param.grad)):
            logger.error("non-finite gradient in %s at step %d", param.name, t)
            raise NonFiniteGradientError(param.name)

    b1, b2 = cfg.beta1, cfg.beta2
    correction1 = 1.0 - b1**t
    correction2 = 1.0 - b2**t
    step_size = lr / correction1
    sqrt_c2 = math.sqrt(correction2)
    for param in params:
        g = param.grad
        param.adam_m *= b1
        param.adam_m += (1.0 - b1) * g
        param.adam_v *= b2
        param.adam_v += (1.0 - b2) * g * g
        denom = np.sqrt(param.adam_v) / sqrt_c2 + cfg.adam_eps
        param.value -= step_size * param.adam_m / denom
    params.zero_grad()
    return params


__all__ = [
    "TrainConfig",
    "poly_lr",
    "adam_step",
]
