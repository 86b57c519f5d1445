"""
Gradient-check cases: every differentiable primitive on a tiny random
instance, plus the end-to-end training loss of a toy network.

Each primitive case wraps its forward pass in a scalar projection
sum(R * output) with a fixed random R, so the backward pass is driven by an
arbitrary upstream gradient.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from pydantic import Field

from pinet_refine.base import BaseModel
from pinet_refine.nn import (
    GradCheckReport,
    GruDirection,
    GruLayerParams,
    Param,
    ParameterStore,
    bi_gru_stack_backward,
    bi_gru_stack_forward,
    grad_check,
    gru_cell,
    gru_cell_backward,
    l1_loss,
    l1_loss_backward,
    linear,
    linear_backward,
    make_rng,
    relu,
    relu_backward,
    sigmoid,
    softmax_rows,
    softmax_rows_backward,
)
from pinet_refine.nn.gradcheck import DifferentiableLoss, KinkSignature, Magnitude
from pinet_refine.skeleton import Person, Pose, Scene
from .attention import AttentionParams, attention_backward, attention_forward
from .config import ModelConfig
from .head import MlpHead, head_backward, head_forward, head_kinks
from .network import PiNet, init_params, input_stats

logger = logging.getLogger(__name__)


class GradCheckSettings(BaseModel):
    eps: float = Field(default=1e-5, ge=1e-7, le=1e-3)
    n_coords: int = Field(default=200, ge=1)
    tol: float = Field(default=1e-5, gt=0)
    seeds: list[int] = Field(default_factory=lambda: [0, 1, 2], min_length=1)
    num_persons: int = Field(default=3, ge=1)
    model: ModelConfig = Field(
        default_factory=lambda: ModelConfig(hidden_size=4, gru_layers=2, mlp_hidden=(6, 5))
    )


@dataclass
class GradCheckCase:
    component: str
    loss: DifferentiableLoss
    store: ParameterStore
    kink_signature: Optional[KinkSignature] = None
    magnitude: Optional[Magnitude] = None


def _store(rng: np.random.Generator, **shapes: tuple[int, ...]) -> ParameterStore:
    store = ParameterStore()
    for name, shape in shapes.items():
        store.add(Param(name, rng.normal(0.0, 0.5, size=shape)))
    return store


def _projected(
    component: str,
    forward: Callable[[], np.ndarray],
    accumulate: Callable[[np.ndarray], None],
    R: np.ndarray,
    store: ParameterStore,
    kink_signature: Optional[KinkSignature] = None,
) -> GradCheckCase:
    """Case on the loss sum(R * forward()); `accumulate(R)` adds the gradients."""

    def loss(s: ParameterStore, backward: bool = False) -> float:
        out = forward()
        if backward:
            accumulate(R)
        return float(np.sum(R * out))

    def magnitude(s: ParameterStore) -> float:
        return float(np.sum(np.abs(R * forward())))

    return GradCheckCase(component, loss, store, kink_signature=kink_signature, magnitude=magnitude)


def linear_case(seed: int) -> GradCheckCase:
    rng = make_rng([seed, 10])
    store = _store(rng, x=(5, 4), W=(4, 3), b=(3,))
    x, W, b = store["x"], store["W"], store["b"]
    R = rng.normal(size=(5, 3))

    def backward(g: np.ndarray) -> None:
        x.grad += linear_backward(g, x.value, W, b)

    return _projected("linear", lambda: linear(x.value, W, b), backward, R, store)


def relu_case(seed: int) -> GradCheckCase:
    rng = make_rng([seed, 11])
    store = _store(rng, x=(6, 5))
    x = store["x"]
    R = rng.normal(size=(6, 5))

    def backward(g: np.ndarray) -> None:
        x.grad += relu_backward(g, x.value)

    return _projected(
        "relu",
        lambda: relu(x.value),
        backward,
        R,
        store,
        kink_signature=lambda s: s["x"].value > 0.0,
    )


def sigmoid_case(seed: int) -> GradCheckCase:
    rng = make_rng([seed, 12])
    store = _store(rng, x=(4, 6))
    x = store["x"]
    R = rng.normal(size=(4, 6))

    def backward(g: np.ndarray) -> None:
        s = sigmoid(x.value)
        x.grad += g * s * (1.0 - s)

    return _projected("sigmoid", lambda: sigmoid(x.value), backward, R, store)


def softmax_case(seed: int) -> GradCheckCase:
    rng = make_rng([seed, 13])
    store = _store(rng, x=(3, 4))
    x = store["x"]
    R = rng.normal(size=(3, 4))

    def backward(g: np.ndarray) -> None:
        x.grad += softmax_rows_backward(g, softmax_rows(x.value))

    return _projected("softmax_rows", lambda: softmax_rows(x.value), backward, R, store)


def gru_cell_case(seed: int, d_in: int = 5, hidden: int = 4) -> GradCheckCase:
    rng = make_rng([seed, 14])
    store = _store(rng, x=(d_in,), h=(hidden,), W=(d_in, 3 * hidden), U=(hidden, 3 * hidden), b=(3 * hidden,))
    params = GruDirection(W=store["W"], U=store["U"], b=store["b"])
    x, h = store["x"], store["h"]
    R = rng.normal(size=hidden)

    def backward(g: np.ndarray) -> None:
        dx, dh = gru_cell_backward(g, x.value, h.value, params)
        x.grad += dx
        h.grad += dh

    return _projected("gru_cell", lambda: gru_cell(x.value, h.value, params), backward, R, store)


def bi_gru_case(seed: int, length: int = 3, d_in: int = 5, hidden: int = 3, depth: int = 2) -> GradCheckCase:
    rng = make_rng([seed, 15])
    shapes: dict[str, tuple[int, ...]] = {"X": (length, d_in)}
    for layer in range(depth):
        width = d_in if layer == 0 else 2 * hidden
        for d in ("fwd", "bwd"):
            shapes[f"l{layer}.{d}.W"] = (width, 3 * hidden)
            shapes[f"l{layer}.{d}.U"] = (hidden, 3 * hidden)
            shapes[f"l{layer}.{d}.b"] = (3 * hidden,)
    store = _store(rng, **shapes)
    layers = [
        GruLayerParams(
            GruDirection.from_store(store, f"l{layer}.fwd"),
            GruDirection.from_store(store, f"l{layer}.bwd"),
        )
        for layer in range(depth)
    ]
    X = store["X"]
    R = rng.normal(size=(length, 2 * hidden))

    def forward() -> np.ndarray:
        out, _ = bi_gru_stack_forward(X.value, layers)
        return out

    def backward(g: np.ndarray) -> None:
        _, caches = bi_gru_stack_forward(X.value, layers)
        X.grad += bi_gru_stack_backward(g, caches, layers)

    return _projected("bi_gru_stack", forward, backward, R, store)


def attention_case(seed: int, n: int = 3, width: int = 4) -> GradCheckCase:
    """The bias b cancels in the row softmax: its true gradient is zero."""
    rng = make_rng([seed, 16])
    store = _store(rng, E=(n, width), A=(width, width), b=(width,))
    att = AttentionParams(A=store["A"], b=store["b"])
    E = store["E"]
    R = rng.normal(size=(n, width))

    def forward() -> np.ndarray:
        U, _ = attention_forward(E.value, att)
        return U

    def backward(g: np.ndarray) -> None:
        _, cache = attention_forward(E.value, att)
        E.grad += attention_backward(g, cache, att)

    return _projected("attention", forward, backward, R, store)


def head_case(seed: int, n: int = 3, dims: tuple[int, ...] = (4, 6, 5, 3)) -> GradCheckCase:
    rng = make_rng([seed, 17])
    shapes: dict[str, tuple[int, ...]] = {"U": (n, dims[0])}
    for k, (fan_in, fan_out) in enumerate(zip(dims[:-1], dims[1:])):
        shapes[f"head.{k}.W"] = (fan_in, fan_out)
        shapes[f"head.{k}.b"] = (fan_out,)
    store = _store(rng, **shapes)
    params = MlpHead.from_store(store, depth=len(dims) - 1)
    U = store["U"]
    R = rng.normal(size=(n, dims[-1]))

    def forward() -> np.ndarray:
        return head_forward(U.value, params)[0]

    def backward(g: np.ndarray) -> None:
        _, cache = head_forward(U.value, params)
        U.grad += head_backward(g, cache, params)

    def kinks(s: ParameterStore) -> np.ndarray:
        return head_kinks(head_forward(U.value, params)[1])

    return _projected("mlp_head", forward, backward, R, store, kink_signature=kinks)


def l1_case(seed: int) -> GradCheckCase:
    rng = make_rng([seed, 18])
    store = _store(rng, pred=(3, 6))
    pred = store["pred"]
    target = rng.normal(0.0, 0.5, size=(3, 6))

    def loss(s: ParameterStore, backward: bool = False) -> float:
        if backward:
            pred.grad += l1_loss_backward(pred.value, target)
        return l1_loss(pred.value, target)

    return GradCheckCase(
        "l1_loss",
        loss,
        store,
        kink_signature=lambda s: np.sign(pred.value - target),
        magnitude=lambda s: float(np.mean(np.abs(pred.value)) + np.mean(np.abs(target))),
    )


def toy_scene(seed: int, num_persons: int, num_joints: int) -> Scene:
    """Noisy persons spread a few meters apart, ground truth nearby."""
    rng = make_rng([seed, 19])
    gt, persons = [], []
    for k in range(num_persons):
        clean = rng.normal(0.0, 300.0, size=(num_joints, 3)) + rng.uniform(-2000.0, 2000.0, size=3)
        gt.append(Pose(joints=clean))
        persons.append(Person(id=k, pose=Pose(joints=clean + rng.normal(0.0, 40.0, size=clean.shape))))
    return Scene(persons=persons, gt=gt)


def end_to_end_case(seed: int, settings: GradCheckSettings) -> GradCheckCase:
    config = settings.model
    scene = toy_scene(seed, settings.num_persons, config.num_joints)
    model = PiNet(config, init_params(config, seed), input_stats(scene.poses, config))
    n = seed % scene.num_persons
    return GradCheckCase(
        "pinet",
        model.loss_fn(scene, n),
        model.store,
        kink_signature=model.kink_signature(scene, n),
        magnitude=model.loss_magnitude(scene, n),
    )


PRIMITIVE_CASES: tuple[Callable[[int], GradCheckCase], ...] = (
    linear_case,
    relu_case,
    sigmoid_case,
    softmax_case,
    gru_cell_case,
    bi_gru_case,
    attention_case,
    head_case,
    l1_case,
)


def gradcheck_cases(settings: GradCheckSettings) -> list[tuple[int, GradCheckCase]]:
    """(seed, case) for every primitive and the end-to-end loss at every seed."""
    cases = []
    for seed in settings.seeds:
        cases += [(seed, build(seed)) for build in PRIMITIVE_CASES]
        cases.append((seed, end_to_end_case(seed, settings)))
    return cases


def run_gradcheck(
    settings: GradCheckSettings,
    cases: Optional[list[tuple[int, GradCheckCase]]] = None,
) -> list[GradCheckReport]:
    """One report per (seed, component)."""
    reports = []
    for seed, case in cases if cases is not None else gradcheck_cases(settings):
        report = grad_check(
            case.loss,
            case.store,
            eps=settings.eps,
            n_coords=settings.n_coords,
            seed=seed,
            tol=settings.tol,
            kink_signature=case.kink_signature,
            component=case.component,
            magnitude=case.magnitude,
        )
        logger.info(
            "%-14s seed %d  max rel err %.3e  (%s)",
            case.component,
            seed,
            report.max_rel_error,
            report.worst_coordinate,
        )
        reports.append(report)
    return reports


__all__ = [
    "GradCheckSettings",
    "GradCheckCase",
    "PRIMITIVE_CASES",
    "toy_scene",
    "end_to_end_case",
    "gradcheck_cases",
    "run_gradcheck",
]
