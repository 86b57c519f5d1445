"""
The interaction network: ordering -> bidirectional GRU embedding ->
self-attention -> shared MLP head, with the train/inference asymmetry
(training refines every sequence position, inference only position 0).
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from pinet_refine.exception import EmptyInputError, MissingGroundTruthError
from pinet_refine.nn import (
    GruDirection,
    GruLayerParams,
    ParameterStore,
    ParamSpec,
    bi_gru_stack,
    bi_gru_stack_backward,
    bi_gru_stack_forward,
    init_store,
    l1_loss,
    l1_loss_backward,
    softmax_rows,
)
from pinet_refine.nn.gradcheck import DifferentiableLoss, Magnitude
from pinet_refine.skeleton import (
    NormStats,
    Ordering,
    Pose,
    Scene,
    compute_stats,
    from_root_relative,
    normalize,
    order_for,
    root_relative,
)
from .attention import (
    AttentionParams,
    apply_attention,
    attention_backward,
    attention_forward,
    attention_scores,
)
from .config import ModelConfig
from .head import MlpHead, head_backward, head_forward, head_kinks

logger = logging.getLogger(__name__)


def param_specs(config: ModelConfig) -> list[ParamSpec]:
    """Every trainable tensor of the network, in initialization/serialization order."""
    H = config.hidden_size
    specs: list[ParamSpec] = []
    directions = ("fwd", "bwd") if config.bidirectional else ("fwd",)
    d_in = config.input_dim
    for layer in range(config.gru_layers):
        for direction in directions:
            prefix = f"gru.l{layer}.{direction}"
            specs.append(ParamSpec(f"{prefix}.W", (d_in, 3 * H), fan_in=d_in))
            specs.append(ParamSpec(f"{prefix}.U", (H, 3 * H), fan_in=H))
            specs.append(ParamSpec(f"{prefix}.b", (3 * H,), fan_in=H, kind="bias"))
        d_in = config.embed_dim
    E = config.embed_dim
    if config.use_attention:
        specs.append(ParamSpec("att.A", (E, E), fan_in=E))
        specs.append(ParamSpec("att.b", (E,), fan_in=E, kind="bias"))
    dims = config.mlp_dims
    for k, (fan_in, fan_out) in enumerate(zip(dims[:-1], dims[1:])):
        specs.append(ParamSpec(f"head.{k}.W", (fan_in, fan_out), fan_in=fan_in))
        specs.append(ParamSpec(f"head.{k}.b", (fan_out,), fan_in=fan_in, kind="bias"))
    return specs


def param_count(config: ModelConfig) -> int:
    """Exact number of trainable scalars."""
    return sum(spec.size for spec in param_specs(config))


def init_params(config: ModelConfig, seed: int) -> ParameterStore:
    return init_store(param_specs(config), seed)


def encode_pose(pose: Pose, config: ModelConfig) -> Pose:
    """The pose in the frame the network reads and writes."""
    return root_relative(pose, config.root_index) if config.root_relative else pose


def input_stats(poses: Sequence[Pose], config: ModelConfig) -> NormStats:
    """Normalization statistics of `poses` in the network frame."""
    return compute_stats([encode_pose(pose, config) for pose in poses])


@dataclass(frozen=True)
class ForwardResult:
    refined: list[Pose]  # scene person order
    loss: float
    ordering: Ordering


class PiNet:
    """
    Network bound to a parameter store and frozen normalization statistics.

    The store is read by reference: updating its values in place (optimizer
    steps, finite-difference steps) is immediately visible to the network.
    """

    def __init__(self, config: ModelConfig, store: ParameterStore, stats: NormStats):
        if stats.num_joints != config.num_joints:
            raise ValueError(
                f"statistics cover {stats.num_joints} joints, model expects {config.num_joints}"
            )
        self.config = config
        self.store = store
        self.stats = stats

        directions = ("fwd", "bwd") if config.bidirectional else ("fwd",)
        self.gru_layers = []
        for layer in range(config.gru_layers):
            parts = [GruDirection.from_store(store, f"gru.l{layer}.{d}") for d in directions]
            self.gru_layers.append(GruLayerParams(*parts))
        self.attention = AttentionParams.from_store(store) if config.use_attention else None
        self.head_params = MlpHead.from_store(store, depth=len(config.mlp_dims) - 1)

    @classmethod
    def initialize(cls, config: ModelConfig, stats: NormStats, seed: int) -> "PiNet":
        return cls(config, init_params(config, seed), stats)

    # ---- pipeline pieces ----
    def ordering(self, scene: Scene, n: int) -> Ordering:
        return order_for(
            scene,
            n,
            strategy=self.config.order,
            root_index=self.config.root_index,
            order_seed=self.config.order_seed,
        )

    def ordered_inputs(self, scene: Scene, ordering: Ordering) -> np.ndarray:
        return np.stack(
            [normalize(encode_pose(scene.persons[m].pose, self.config), self.stats) for m in ordering.perm]
        )

    def embed(self, ordered_inputs: Sequence[np.ndarray] | np.ndarray) -> np.ndarray:
        """N x E embedding matrix; row k belongs to sequence position k."""
        if len(ordered_inputs) == 0:
            raise EmptyInputError("embed needs at least one pose")
        return bi_gru_stack(ordered_inputs, self.gru_layers)

    def attention_weights(self, Emat: np.ndarray) -> np.ndarray:
        if self.attention is None:
            return np.eye(Emat.shape[0])
        S, _ = attention_scores(Emat, self.attention)
        return softmax_rows(S)

    def _decode(self, row: np.ndarray, source: Pose) -> Pose:
        """Camera-frame pose from one output row (mm, network frame); the root comes from `source`."""
        encoded = Pose.from_flat(row)
        if not self.config.root_relative:
            return encoded
        r = self.config.root_index
        return from_root_relative(encoded, r, root=source.joints[r])

    @property
    def _root_slot(self) -> slice:
        r = self.config.root_index
        return slice(3 * r, 3 * r + 3)

    # ---- training path ----
    def _forward_all(self, scene: Scene, n: int):
        scene.check_index(n)
        ordering = self.ordering(scene, n)
        X = self.ordered_inputs(scene, ordering)
        Emat, gru_cache = bi_gru_stack_forward(X, self.gru_layers)
        if self.attention is not None:
            U, att_cache = attention_forward(Emat, self.attention)
        else:
            U, att_cache = Emat, None
        Y, head_cache = head_forward(U, self.head_params)
        if self.config.predict_residual:
            Y = Y + X
        Z = Y * self.stats.std + self.stats.mean
        return ordering, Z, (gru_cache, att_cache, head_cache)

    def _loss_terms(self, scene: Scene, ordering: Ordering, Z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Predictions and targets (N x 3J, mm) compared by the L1 loss, rows in ordering order."""
        if scene.gt is None:
            raise MissingGroundTruthError("training forward pass needs ground truth")
        target = np.stack([encode_pose(scene.gt[m], self.config).flatten() for m in ordering.perm])
        if not self.config.root_relative:
            return Z, target
        # the root passes through, so only root-aligned joints are compared
        pred = Z.copy()
        pred[:, self._root_slot] = 0.0
        target[:, self._root_slot] = 0.0
        return pred, target

    def forward_train(self, scene: Scene, n: int, backward: bool = False) -> ForwardResult:
        """
        Refine every person of the scene under the ordering of person `n`.

        Args:
            scene: (Scene) scene with ground truth.
            n: (int) index of the person-of-interest.
            backward: (bool) also accumulate parameter gradients of the loss.

        Returns:
            ForwardResult: refined poses in scene order and the L1 loss (mm)
            against the ground truths, matched through the ordering. In the
            root-relative frame both sides are root-aligned first.
        """
        if scene.gt is None:
            raise MissingGroundTruthError("training forward pass needs ground truth")
        ordering, Z, caches = self._forward_all(scene, n)
        pred, target = self._loss_terms(scene, ordering, Z)
        loss = l1_loss(pred, target)

        if backward:
            gru_cache, att_cache, head_cache = caches
            dZ = l1_loss_backward(pred, target)
            if self.config.root_relative:
                dZ[:, self._root_slot] = 0.0
            dU = head_backward(dZ * self.stats.std, head_cache, self.head_params)
            if self.attention is not None:
                dE = attention_backward(dU, att_cache, self.attention)
            else:
                dE = dU
            bi_gru_stack_backward(dE, gru_cache, self.gru_layers)

        refined: list[Optional[Pose]] = [None] * scene.num_persons
        for position, m in enumerate(ordering.perm):
            refined[m] = self._decode(Z[position], scene.persons[m].pose)
        return ForwardResult(refined=refined, loss=loss, ordering=ordering)

    def loss_fn(self, scene: Scene, n: int) -> DifferentiableLoss:
        """Training loss of one scene/person-of-interest as a function of the store."""

        def f(store: ParameterStore, backward: bool = False) -> float:
            return self.forward_train(scene, n, backward=backward).loss

        return f

    def loss_magnitude(self, scene: Scene, n: int) -> Magnitude:
        """Mean absolute prediction plus mean absolute target, the scale of the loss's terms."""

        def magnitude(store: ParameterStore) -> float:
            ordering, Z, _ = self._forward_all(scene, n)
            pred, target = self._loss_terms(scene, ordering, Z)
            return float(np.mean(np.abs(pred)) + np.mean(np.abs(target)))

        return magnitude

    def kink_signature(self, scene: Scene, n: int):
        def signature(store: ParameterStore) -> np.ndarray:
            ordering, Z, (_, _, head_cache) = self._forward_all(scene, n)
            pred, target = self._loss_terms(scene, ordering, Z)
            return np.concatenate([np.sign(pred - target).ravel(), head_kinks(head_cache)])

        return signature

    # ---- inference path ----
    def refine_person(self, scene: Scene, n: int) -> Pose:
        """Refined pose of person `n`; only sequence position 0 goes through attention and head."""
        scene.check_index(n)
        ordering = self.ordering(scene, n)
        X = self.ordered_inputs(scene, ordering)
        Emat = self.embed(X)
        if self.attention is not None:
            S0, _ = attention_scores(Emat, self.attention, rows=slice(0, 1))
            u0 = apply_attention(softmax_rows(S0), Emat)
        else:
            u0 = Emat[:1]
        y0, _ = head_forward(u0, self.head_params)
        if self.config.predict_residual:
            y0 = y0 + X[:1]
        z0 = y0 * self.stats.std + self.stats.mean
        return self._decode(z0[0], scene.persons[n].pose)

    def refine_scene(self, scene: Scene, threads: int = 1) -> list[Pose]:
        """One independent refine_person per person, each under its own ordering."""
        indices = range(scene.num_persons)
        if threads > 1 and scene.num_persons > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                return list(pool.map(lambda n: self.refine_person(scene, n), indices))
        return [self.refine_person(scene, n) for n in indices]

    def attention_map(self, scene: Scene, n: int) -> np.ndarray:
        """N x N attention weights for person `n`'s ordering, re-indexed to scene order."""
        ordering = self.ordering(scene, n)
        W = self.attention_weights(self.embed(self.ordered_inputs(scene, ordering)))
        inv = ordering.inverse()
        return W[np.ix_(inv, inv)]


def refine_dataset(model: PiNet, scenes: Sequence[Scene], threads: int = 1) -> list[list[Pose]]:
    """Refined poses of every scene, in scene and person order."""
    return [model.refine_scene(scene, threads=threads) for scene in scenes]


__all__ = [
    "refine_dataset",
    "param_specs",
    "param_count",
    "init_params",
    "encode_pose",
    "input_stats",
    "ForwardResult",
    "PiNet",
]
