import math

import numpy as np
import pytest

from sdmet.coords import from_halfplane, one_minus_cos, one_plus_cos, pullback_jacobian, to_halfplane
from sdmet.errors import DomainError
from sdmet.geometry import ChartPoint
from sdmet.lebrun import (
    LeBrunChartData,
    Variant,
    conformal_factor,
    conformal_factor_xy,
    metric_glb,
    metric_glb_rescaled,
    metric_gtilde,
)
from sdmet.monopole import MonopoleConfig, potential_V

import oracles

V1 = 1 + (-0.5 + 3 / (2 * math.sqrt(5)))  # V at (r, z) = (1, 1), c = 1


def _random_configs(rng, count, max_n=3):
    for _ in range(count):
        n = int(rng.integers(1, max_n + 1))
        yield MonopoleConfig(tuple(np.sort(rng.uniform(0.1, 5.0, n))))


def test_flat_case_is_doubled_polar():
    g = metric_glb(MonopoleConfig(), ChartPoint.cyl(1.3, 0, 0.7, 0)).g
    np.testing.assert_array_equal(g, np.diag([1, 1.3**2, 1, 0.7**2]))


def test_single_monopole_values():
    g = metric_glb(MonopoleConfig((1.0,)), ChartPoint.cyl(1, 0, 1, 0))
    assert g.component("r", "r") == pytest.approx(1.1708204, abs=1e-7)
    assert g.component("z", "z") == pytest.approx(V1, rel=1e-15)
    assert g.component("theta", "theta") == pytest.approx(0.8541020, abs=1e-7)


def test_matches_oracle_metric(rng):
    for cfg in _random_configs(rng, 10):
        r, z = rng.uniform(0.05, 6, 2)
        got = metric_glb(cfg, ChartPoint.cyl(r, 0, z, 0)).g
        ref = np.array(oracles.g_lb(cfg.heights, r, z).tolist(), dtype=float)
        np.testing.assert_allclose(got, ref, rtol=1e-12, atol=1e-14)


def test_symmetric_positive_definite(rng):
    for cfg in _random_configs(rng, 200):
        r, z = rng.uniform(0.01, 10, 2)
        m = metric_glb(cfg, ChartPoint.cyl(r, rng.uniform(0, 6), z, rng.uniform(0, 6)))
        assert np.array_equal(m.g, m.g.T)
        assert m.is_positive_definite()


def test_axis_is_refused():
    with pytest.raises(DomainError):
        metric_glb(MonopoleConfig((1.0,)), ChartPoint.cyl(0, 0, 2, 0))
    with pytest.raises(DomainError):
        metric_glb(MonopoleConfig((1.0,)), ChartPoint.halfplane(0, 2, 0, 0))


def test_rescaled_examples():
    assert np.allclose(metric_glb_rescaled(MonopoleConfig(), ChartPoint.cyl(1, 0, 1, 0)).g, np.eye(4))
    g = metric_glb_rescaled(MonopoleConfig((1.0,)), ChartPoint.cyl(1, 0, 1, 0))
    assert g.component("theta", "theta") == pytest.approx(0.7294902, abs=1e-7)


def test_rescaled_ratio(rng):
    for cfg in _random_configs(rng, 30):
        r, z = rng.uniform(0.05, 5, 2)
        p = ChartPoint.cyl(r, 0, z, 0)
        a, b = metric_glb(cfg, p).g, metric_glb_rescaled(cfg, p).g
        mask = b != 0
        ratio = a[mask] / b[mask]
        expect = z * z * potential_V(cfg, r, z)
        np.testing.assert_allclose(ratio, expect, rtol=1e-13)


def test_tau_theta_block_determinant(rng):
    # V r^2 (z^2 / V) = r^2 z^2: the connection term cancels
    for cfg in _random_configs(rng, 30):
        r, z = rng.uniform(0.05, 5, 2)
        g = metric_glb(cfg, ChartPoint.cyl(r, 0, z, 0)).g
        det = g[1, 1] * g[3, 3] - g[1, 3] ** 2
        assert det == pytest.approx(r * r * z * z, rel=1e-12)


def test_tilde_examples():
    g = metric_gtilde(MonopoleConfig((1.0,)), ChartPoint.halfplane(0, 2, 0, 0))
    assert g.g[2, 2] == pytest.approx(2 / V1**2, rel=1e-14)
    assert g.g[2, 2] == pytest.approx(1.4589803, abs=1e-7)
    flat = metric_gtilde(MonopoleConfig(), ChartPoint.halfplane(0, 1, 0, 0)).g
    np.testing.assert_allclose(flat, np.diag([1, 1, 2, 2]), atol=1e-15)


def test_tilde_matches_oracle(rng):
    for cfg in _random_configs(rng, 20):
        x1, x2 = rng.uniform(-20, 20), rng.uniform(0.05, 20)
        got = metric_gtilde(cfg, ChartPoint.halfplane(x1, x2, 0, 0)).g
        ref = np.array(oracles.g_tilde(cfg.heights, x1, x2).tolist(), dtype=float)
        np.testing.assert_allclose(got, ref, rtol=1e-11, atol=1e-13)


def test_conformal_factor_examples():
    assert conformal_factor(MonopoleConfig((1.0,)), ChartPoint.halfplane(0, 2, 0, 0)) == pytest.approx(2 / V1)
    assert conformal_factor(MonopoleConfig((1.0,)), ChartPoint.halfplane(0, 2, 0, 0)) == pytest.approx(1.7082039, abs=1e-7)
    assert conformal_factor(MonopoleConfig(), ChartPoint.halfplane(0, 2, 0, 0)) == pytest.approx(2.0)


def test_conformal_factor_positive(rng):
    cfg = MonopoleConfig((0.4, 1.5))
    x1 = rng.uniform(-30, 30, 500)
    x2 = rng.uniform(1e-3, 30, 500)
    assert np.all(conformal_factor_xy(cfg, x1, x2) > 0)


def test_conformal_factor_against_definition(rng):
    # 2R(R - x1) / (x2^2 z^2 V) evaluated literally at high precision
    for cfg in _random_configs(rng, 10):
        x1, x2 = rng.uniform(-10, 10), rng.uniform(0.1, 10)
        big_r = math.hypot(x1, x2)
        z2 = (big_r - x1) / 2
        v = oracles.to_float(oracles.V_half(cfg.heights, x1, x2))
        assert conformal_factor_xy(cfg, x1, x2) == pytest.approx(2 * big_r * (big_r - x1) / (x2**2 * z2 * v), rel=1e-10)


def test_pullback_of_tilde_is_conformal_to_lebrun(rng):
    for cfg in _random_configs(rng, 40):
        r, z = rng.uniform(0.05, 5, 2)
        x1, x2 = to_halfplane(r, z)
        gt = metric_gtilde(cfg, ChartPoint.halfplane(x1, x2, 0, 0)).g
        jac = pullback_jacobian(r, z)
        pulled = jac.T @ gt @ jac / conformal_factor_xy(cfg, x1, x2)
        glb = metric_glb(cfg, ChartPoint.cyl(r, 0, z, 0)).g
        np.testing.assert_allclose(pulled, glb, rtol=1e-12, atol=1e-12)


def test_chart_data_dispatch():
    cfg = MonopoleConfig((1.0,))
    d = LeBrunChartData(cfg, Variant.TILDE)
    p = ChartPoint.halfplane(0, 2, 0, 0)
    np.testing.assert_array_equal(d.metric(p).g, metric_gtilde(cfg, p).g)
    assert np.allclose(np.array(d.field()(0.0, 2.0, 0.0, 0.0), dtype=float), d.metric(p).g)
    assert LeBrunChartData(cfg, Variant.FULL).chart.name == "CYL_LB"


def test_coordinate_change_examples():
    assert to_halfplane(1.0, 1.0) == (0.0, 2.0)
    assert to_halfplane(2.0, 1.0) == (3.0, 4.0)
    r, z = from_halfplane(3.0, 4.0)
    assert (r, z) == pytest.approx((2.0, 1.0), rel=1e-15)


def test_coordinate_round_trip(rng):
    x1 = rng.uniform(-1e3, 1e3, 10_000)
    x2 = 10 ** rng.uniform(-6, 3, 10_000)
    worst = 0.0
    for a, b in zip(x1, x2):
        r, z = from_halfplane(a, b)
        c, d = to_halfplane(r, z)
        worst = max(worst, abs(c - a) / (1 + abs(a)), abs(d - b) / b)
    assert worst < 1e-12


def test_monopole_image_is_boundary_point():
    c = 1.7
    x1, x2 = to_halfplane(1e-9, c)
    assert x1 == pytest.approx(-c * c) and x2 < 1e-8


def test_stable_cosines_agree_with_naive_form(rng):
    x1 = rng.uniform(-5, 5, 100)
    x2 = rng.uniform(0.5, 5, 100)
    big_r = np.hypot(x1, x2)
    np.testing.assert_allclose(one_minus_cos(x1, x2, big_r), 1 - x1 / big_r, rtol=1e-13)
    np.testing.assert_allclose(one_plus_cos(x1, x2, big_r), 1 + x1 / big_r, rtol=1e-13)
    # far along the positive axis the naive form loses every digit
    assert one_minus_cos(1e9, 1.0, math.hypot(1e9, 1.0)) == pytest.approx(1e-18 / 2, rel=1e-12)
