from .params import Param, ParameterStore
from .layers import (
    linear,
    linear_backward,
    relu,
    relu_backward,
    sigmoid,
    softmax_rows,
    softmax_rows_backward,
)
from .gru import (
    GruDirection,
    GruLayerParams,
    gru_cell,
    gru_cell_backward,
    bi_gru_stack,
    bi_gru_stack_forward,
    bi_gru_stack_backward,
)
from .loss import l1_loss, l1_loss_backward
from .optim import TrainConfig, poly_lr, adam_step
from .init import PRNG_ALGORITHM, ParamSpec, make_rng, init_store
from .gradcheck import DifferentiableLoss, GradCheckReport, grad_check

__all__ = [
    "Param",
    "ParameterStore",
    "linear",
    "linear_backward",
    "relu",
    "relu_backward",
    "sigmoid",
    "softmax_rows",
    "softmax_rows_backward",
    "GruDirection",
    "GruLayerParams",
    "gru_cell",
    "gru_cell_backward",
    "bi_gru_stack",
    "bi_gru_stack_forward",
    "bi_gru_stack_backward",
    "l1_loss",
    "l1_loss_backward",
    "TrainConfig",
    "poly_lr",
    "adam_step",
    "PRNG_ALGORITHM",
    "ParamSpec",
    "make_rng",
    "init_store",
    "DifferentiableLoss",
    "GradCheckReport",
    "grad_check",
]
