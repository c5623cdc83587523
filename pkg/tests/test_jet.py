import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sdmet import jet
from sdmet.jet import Jet

import oracles

coord = st.floats(min_value=0.2, max_value=3.0)


def _fn(x, y):
    return jet.sin(x * y) * jet.exp(0.3 * x) / (1.0 + y * y) + jet.sqrt(x + y) * jet.log(1.0 + x) - x**3 * y


def _fn_mp(x, y):
    return mp.sin(x * y) * mp.exp(0.3 * x) / (1 + y * y) + mp.sqrt(x + y) * mp.log(1 + x) - x**3 * y


@settings(max_examples=40, deadline=None)
@given(coord, coord)
def test_gradient_and_hessian_match_high_precision_differences(x, y):
    out = _fn(*jet.seed((x, y)))
    v, g, h = oracles.derivs(_fn_mp, (x, y))
    assert out.value == pytest.approx(float(v), rel=1e-14, abs=1e-14)
    np.testing.assert_allclose(out.grad, [float(t) for t in g], rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(out.hess, [[float(t) for t in row] for row in h], rtol=1e-11, atol=1e-11)


@settings(max_examples=40, deadline=None)
@given(coord, coord, coord)
def test_leibniz_rule(x, y, a):
    u, w = jet.seed((x, y))
    f = jet.sin(u) + a * w
    g = jet.exp(w) * u
    fg = f * g
    np.testing.assert_allclose(fg.grad, f.value * g.grad + g.value * f.grad, rtol=1e-13)
    expect = f.value * g.hess + g.value * f.hess + np.outer(f.grad, g.grad) + np.outer(g.grad, f.grad)
    np.testing.assert_allclose(fg.hess, expect, rtol=1e-12, atol=1e-14)


@settings(max_examples=30, deadline=None)
@given(coord, coord, st.floats(-3, 3), st.floats(-3, 3))
def test_linearity(x, y, a, b):
    u, w = jet.seed((x, y))
    f, g = jet.cos(u * w), u / w
    lin = a * f + b * g
    np.testing.assert_allclose(lin.grad, a * f.grad + b * g.grad, atol=1e-12)
    np.testing.assert_allclose(lin.hess, a * f.hess + b * g.hess, atol=1e-12)


def test_division_and_powers():
    x, y = jet.seed((2.0, 3.0))
    q = x / y
    assert q.value == pytest.approx(2 / 3)
    np.testing.assert_allclose(q.grad, [1 / 3, -2 / 9])
    np.testing.assert_allclose(q.hess, [[0, -1 / 9], [-1 / 9, 4 / 27]])
    p = x**2.5
    assert p.grad[0] == pytest.approx(2.5 * 2**1.5)
    assert p.hess[0, 0] == pytest.approx(2.5 * 1.5 * 2**0.5)
    r = 2.0 / x
    assert r.grad[0] == pytest.approx(-0.5)


def test_dispatchers_accept_plain_values_and_arrays():
    assert jet.sqrt(4.0) == 2.0
    np.testing.assert_allclose(jet.exp(np.array([0.0, 1.0])), [1.0, math.e])
    assert jet.value_of(3.5) == 3.5


def test_seed_order_zero_gives_floats():
    assert jet.seed((1, 2), order=0) == [1.0, 2.0]


def test_stack_shapes_and_constants():
    x, y = jet.seed((1.0, 2.0))
    val, grad, hess = jet.stack([[x * y, 5.0], [5.0, y]], 2)
    assert val.tolist() == [[2.0, 5.0], [5.0, 2.0]]
    assert grad.shape == (2, 2, 2) and hess.shape == (2, 2, 2, 2)
    np.testing.assert_array_equal(grad[0, 1], 0.0)
    np.testing.assert_array_equal(hess[0, 0], [[0, 1], [1, 0]])


def test_numpy_ufuncs_are_refused():
    x, = jet.seed((1.0,))
    with pytest.raises(TypeError):
        np.sin(x)


def test_jet_is_not_silently_truncated_by_float():
    x, = jet.seed((1.5,))
    assert isinstance(x * 2.0, Jet)
    assert isinstance(2.0 - x, Jet)
