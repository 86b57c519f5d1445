from pydantic import Field, model_validator

from pinet_refine.base import BaseModel
from pinet_refine.skeleton import DEFAULT_ROOT_INDEX, NUM_JOINTS, OrderStrategy


class ModelConfig(BaseModel):
    """
    Network shape and ablation switches.

    The head maps E -> mlp_hidden[0] -> mlp_hidden[1] -> 3J with rectification
    between layers; defaults give 512 -> 512 -> 256 -> 51.

    With `root_relative` the network sees every joint relative to the root
    joint, the root slot carrying the absolute root position, and the input
    root passes through to the refined pose.
    """

    num_joints: int = Field(default=NUM_JOINTS, ge=1)
    hidden_size: int = Field(default=256, ge=1)
    gru_layers: int = Field(default=3, ge=1)
    mlp_hidden: tuple[int, int] = (512, 256)
    use_attention: bool = True
    bidirectional: bool = True
    predict_residual: bool = False
    root_relative: bool = True
    order: OrderStrategy = "intuitive"
    order_seed: int = 0
    root_index: int = Field(default=DEFAULT_ROOT_INDEX, ge=0)

    @model_validator(mode="after")
    def _check_dims(self) -> "ModelConfig":
        if any(d < 1 for d in self.mlp_hidden):
            raise ValueError(f"mlp_hidden sizes must be >= 1, got {self.mlp_hidden}")
        if self.root_index >= self.num_joints:
            raise ValueError(
                f"root_index {self.root_index} out of range for {self.num_joints} joints"
            )
        return self

    @property
    def input_dim(self) -> int:
        return 3 * self.num_joints

    @property
    def embed_dim(self) -> int:
        return self.hidden_size * (2 if self.bidirectional else 1)

    @property
    def mlp_dims(self) -> list[int]:
        return [self.embed_dim, *self.mlp_hidden, self.input_dim]


__all__ = [
    "ModelConfig",
]
