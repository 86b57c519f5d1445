"""
Central finite-difference verification of hand-derived gradients.
"""

import logging
import math
from typing import Callable, Optional, Protocol

import numpy as np

from pinet_refine.base import BaseModel
from pinet_refine.exception import NonFiniteValueError
from .init import make_rng
from .params import ParameterStore

logger = logging.getLogger(__name__)

MACHINE_EPS = float(np.finfo(np.float64).eps)
# ulps of the summed-term magnitude a forward pass may lose
ROUNDOFF_ULPS = 4.0


class DifferentiableLoss(Protocol):
    def __call__(self, store: ParameterStore, backward: bool = False) -> float:
        """Return the loss; with `backward=True` also accumulate gradients into `store`."""
        ...


KinkSignature = Callable[[ParameterStore], np.ndarray]
Magnitude = Callable[[ParameterStore], float]


class GradCheckReport(BaseModel):
    component: str
    loss: float
    eps: float
    floor: float
    max_rel_error: float
    worst_param: Optional[str] = None
    worst_index: Optional[tuple[int, ...]] = None
    checked: int = 0
    below_floor: int = 0
    skipped_kinks: int = 0

    def passed(self, tol: float) -> bool:
        return self.max_rel_error < tol

    @property
    def worst_coordinate(self) -> str:
        if self.worst_param is None:
            return "-"
        return f"{self.worst_param}{list(self.worst_index or ())}"


def _evaluate(f: DifferentiableLoss, store: ParameterStore) -> float:
    value = float(f(store, backward=False))
    if not math.isfinite(value):
        raise NonFiniteValueError(f"loss evaluated to {value!r} during gradient check")
    return value


def _sample_coordinates(store: ParameterStore, n_coords: int, rng: np.random.Generator):
    total = store.num_scalars()
    coords = []
    for param in store:
        k = min(param.size, max(2, math.ceil(n_coords * param.size / total)))
        for flat in rng.choice(param.size, size=k, replace=False):
            coords.append((param, np.unravel_index(int(flat), param.shape)))
    return coords


def grad_check(
    f: DifferentiableLoss,
    at: ParameterStore,
    eps: float = 1e-5,
    n_coords: int = 200,
    seed: int = 0,
    tol: float = 1e-5,
    kink_signature: Optional[KinkSignature] = None,
    component: str = "loss",
    magnitude: Optional[Magnitude] = None,
) -> GradCheckReport:
    """
    Compare analytic gradients of `f` at `at` with central differences.

    Args:
        f: (DifferentiableLoss) scalar function of the parameter store.
        at: (ParameterStore) evaluation point; values are restored afterwards.
        eps: (float) finite-difference step, within [1e-7, 1e-3].
        n_coords: (int) at least this many coordinates are checked (all of
            them when the store is smaller), spread over every parameter.
        seed: (int) seed of the coordinate subsample.
        tol: (float) target relative tolerance, used to size the floor.
        kink_signature: (Optional[KinkSignature]) returns the on/off pattern
            of every non-smooth unit; coordinates whose stencil changes it are
            skipped.
        component: (str) label carried into the report.
        magnitude: (Optional[Magnitude]) sum of the absolute values of the
            terms that make up `f` at the evaluation point. When the terms
            cancel, |f| understates the round-off of the stencil; defaults to |f|.

    Returns:
        GradCheckReport: max over coordinates of |a - n| / max(|a|, |n|, floor),
        with floor = max(1e-8, ROUNDOFF_ULPS * machine_eps * M / (eps * tol))
        and M = max(|f|, magnitude), the smallest gradient the stencil
        resolves to `tol`. Gradients below the floor are compared in absolute
        terms, so a true zero is checked against round-off of size M.
    """
    if not 1e-7 <= eps <= 1e-3:
        raise ValueError(f"grad_check: eps must lie in [1e-7, 1e-3], got {eps}")

    at.zero_grad()
    loss = float(f(at, backward=True))
    if not math.isfinite(loss):
        raise NonFiniteValueError(f"loss evaluated to {loss!r} during gradient check")
    analytic = {p.name: p.grad.copy() for p in at}
    at.zero_grad()

    scale = max(abs(loss), float(magnitude(at))) if magnitude is not None else abs(loss)
    floor = max(1e-8, ROUNDOFF_ULPS * MACHINE_EPS * scale / (eps * tol))
    report = GradCheckReport(component=component, loss=loss, eps=eps, floor=floor, max_rel_error=0.0)

    for param, index in _sample_coordinates(at, n_coords, make_rng(seed)):
        original = param.value[index]
        param.value[index] = original + eps
        f_plus = _evaluate(f, at)
        sig_plus = kink_signature(at) if kink_signature is not None else None
        param.value[index] = original - eps
        f_minus = _evaluate(f, at)
        sig_minus = kink_signature(at) if kink_signature is not None else None
        param.value[index] = original

        if sig_plus is not None and not np.array_equal(sig_plus, sig_minus):
            report.skipped_kinks += 1
            continue

        numeric = (f_plus - f_minus) / (2.0 * eps)
        a = float(analytic[param.name][index])
        if max(abs(a), abs(numeric)) < floor:
            report.below_floor += 1
        rel = abs(a - numeric) / max(abs(a), abs(numeric), floor)
        report.checked += 1
        if rel > report.max_rel_error or report.worst_param is None:
            report.max_rel_error = max(rel, report.max_rel_error)
            report.worst_param = param.name
            report.worst_index = tuple(int(i) for i in index)

    logger.debug(
        "grad_check %s: max rel err %.3e at %s (%d checked, %d kinks skipped)",
        component,
        report.max_rel_error,
        report.worst_coordinate,
        report.checked,
        report.skipped_kinks,
    )
    return report


__all__ = [
    "DifferentiableLoss",
    "KinkSignature",
    "Magnitude",
    "ROUNDOFF_ULPS",
    "GradCheckReport",
    "grad_check",
]
