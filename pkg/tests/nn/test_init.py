import numpy as np
import pytest

from pinet_refine.nn import ParamSpec, init_store, make_rng


def test_same_seed_same_store():
    specs = [ParamSpec("W", (8, 4), fan_in=8), ParamSpec("b", (4,), fan_in=8, kind="bias")]
    assert init_store(specs, 3).equals(init_store(specs, 3))
    assert not init_store(specs, 3).equals(init_store(specs, 4))


def test_uniform_fan_in_scale():
    store = init_store([ParamSpec("W", (256, 256), fan_in=256)], 0)
    values = store["W"].value
    bound = 1.0 / np.sqrt(256)
    assert np.abs(values).max() <= bound
    assert values.std() == pytest.approx(bound / np.sqrt(3), rel=0.1)


def test_biases_start_at_zero():
    store = init_store([ParamSpec("b", (12,), fan_in=4, kind="bias")], 0)
    np.testing.assert_array_equal(store["b"].value, np.zeros(12))


def test_make_rng_accepts_sequences():
    a = make_rng([1, 2, 3]).normal(size=4)
    b = make_rng([1, 2, 3]).normal(size=4)
    c = make_rng([1, 2, 4]).normal(size=4)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)
