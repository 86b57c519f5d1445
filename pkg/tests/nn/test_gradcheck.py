import numpy as np
import pytest

from pinet_refine.nn import (
    Param,
    ParameterStore,
    grad_check,
    l1_loss,
    l1_loss_backward,
    linear,
    linear_backward,
    make_rng,
)
from pinet_refine.nn.gradcheck import MACHINE_EPS, ROUNDOFF_ULPS


def _linear_l1(rng):
    store = ParameterStore([Param("W", rng.normal(size=(4, 3))), Param("b", rng.normal(size=3))])
    x = rng.normal(size=(5, 4))
    target = rng.normal(size=(5, 3))

    def f(s: ParameterStore, backward: bool = False) -> float:
        out = linear(x, s["W"], s["b"])
        if backward:
            linear_backward(l1_loss_backward(out, target), x, s["W"], s["b"])
        return l1_loss(out, target)

    def kinks(s: ParameterStore) -> np.ndarray:
        return np.sign(linear(x, s["W"], s["b"]) - target)

    return f, store, kinks


def test_linear_l1_passes(rng):
    f, store, kinks = _linear_l1(rng)
    report = grad_check(f, store, eps=1e-5, n_coords=15, kink_signature=kinks)
    assert report.checked + report.skipped_kinks == store.num_scalars()
    assert report.max_rel_error < 1e-6
    assert report.passed(1e-5)


def test_constant_function():
    store = ParameterStore([Param("w", np.ones(4))])

    def f(s: ParameterStore, backward: bool = False) -> float:
        return 3.0

    report = grad_check(f, store, eps=1e-5)
    assert report.max_rel_error == 0.0
    assert report.below_floor == report.checked == 4


def test_values_are_restored(rng):
    f, store, kinks = _linear_l1(rng)
    before = store.copy()
    grad_check(f, store, kink_signature=kinks)
    assert store.equals(before)


def test_wrong_gradient_is_detected(rng):
    store = ParameterStore([Param("w", rng.normal(size=6))])

    def f(s: ParameterStore, backward: bool = False) -> float:
        w = s["w"].value
        if backward:
            s["w"].grad += 2.0 * w * 1.01
        return float(np.sum(w * w))

    report = grad_check(f, store)
    assert not report.passed(1e-5)
    assert report.worst_param == "w"
    assert report.worst_coordinate.startswith("w[")


def test_eps_range_is_enforced():
    store = ParameterStore([Param("w", np.ones(1))])
    with pytest.raises(ValueError):
        grad_check(lambda s, backward=False: 0.0, store, eps=1e-2)


def test_floor_follows_term_magnitude():
    # (big + y) - big - y: the true gradient is zero, the stencil sees round-off of size big
    big = 1e3
    store = ParameterStore([Param("y", np.array([0.3, -0.7, 1.1]))])

    def f(s: ParameterStore, backward: bool = False) -> float:
        y = s["y"].value
        return float(np.sum((big + y) - big - y))

    def terms(s: ParameterStore) -> float:
        return float(np.sum(2.0 * big + 2.0 * np.abs(s["y"].value)))

    report = grad_check(f, store, eps=1e-5, tol=1e-5, magnitude=terms)
    expected = ROUNDOFF_ULPS * MACHINE_EPS * terms(store) / (1e-5 * 1e-5)
    assert report.floor == pytest.approx(expected)
    assert report.below_floor == report.checked == 3
    assert report.passed(1e-5)

    plain = grad_check(f, store, eps=1e-5, tol=1e-5)
    assert plain.floor < report.floor
