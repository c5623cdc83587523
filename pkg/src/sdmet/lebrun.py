"""Toric LeBrun metrics in the cylindrical and half-plane charts.

Component orderings are fixed: ``(r, tau, z, theta)`` on the cylindrical chart
and ``(x1, x2, theta, tau)`` on the half-plane chart, so that under the
identification with Joyce metrics the fiber coordinates line up with
``(y1, y2)``.

Three variants are provided:

* ``FULL``      ``z^2 V g_H3 + (z^2 / V)(dtheta + f dtau)^2``
* ``RESCALED``  the full metric divided by ``z^2 V``
* ``TILDE``     ``g_H2 + (2R^2/x2^2)[(1 + x1/R) dtau^2 + (1 - x1/R)(dtheta + f dtau)^2 / V^2]``

The ``*_components`` functions take raw coordinates (floats or jets) and
return nested 4x4 lists, which is what the curvature engine consumes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

from . import jet
from .coords import one_minus_cos, one_plus_cos
from .errors import DomainError
from .geometry import Chart, ChartPoint, MetricTensor
from .monopole import (
    MonopoleConfig,
    flux_f,
    flux_f_halfplane,
    potential_V,
    potential_V_halfplane,
)


class Variant(enum.Enum):
    FULL = "full"
    RESCALED = "rescaled"
    TILDE = "tilde"

    @property
    def chart(self) -> Chart:
        return Chart.HALF_PLANE if self is Variant.TILDE else Chart.CYL_LB


@dataclass(frozen=True)
class LeBrunChartData:
    cfg: MonopoleConfig
    variant: Variant

    @property
    def chart(self) -> Chart:
        return self.variant.chart

    def field(self) -> Callable:
        return {
            Variant.FULL: glb_field,
            Variant.RESCALED: glb_rescaled_field,
            Variant.TILDE: gtilde_field,
        }[self.variant](self.cfg)

    def metric(self, p: ChartPoint) -> MetricTensor:
        return {
            Variant.FULL: metric_glb,
            Variant.RESCALED: metric_glb_rescaled,
            Variant.TILDE: metric_gtilde,
        }[self.variant](self.cfg, p)


def _sym(d: dict, diag) -> list:
    m = [[0.0] * 4 for _ in range(4)]
    for i, v in enumerate(diag):
        m[i][i] = v
    for (i, j), v in d.items():
        m[i][j] = m[j][i] = v
    return m


def glb_components(cfg: MonopoleConfig, r, z) -> list:
    v = potential_V(cfg, r, z)
    f = flux_f(cfg, r, z)
    z2 = z * z
    return _sym(
        {(1, 3): z2 * f / v},
        [v, v * r * r + z2 * f * f / v, v, z2 / v],
    )


def glb_rescaled_components(cfg: MonopoleConfig, r, z) -> list:
    v = potential_V(cfg, r, z)
    f = flux_f(cfg, r, z)
    iz2 = 1.0 / (z * z)
    iv2 = 1.0 / (v * v)
    return _sym(
        {(1, 3): f * iv2},
        [iz2, r * r * iz2 + f * f * iv2, iz2, iv2],
    )


def gtilde_components(cfg: MonopoleConfig, x1, x2) -> list:
    v = potential_V_halfplane(cfg, x1, x2)
    f = flux_f_halfplane(cfg, x1, x2)
    big_r = jet.sqrt(x1 * x1 + x2 * x2)
    ix22 = 1.0 / (x2 * x2)
    k = 2.0 * big_r * big_r * ix22
    fiber = k * one_minus_cos(x1, x2, big_r) / (v * v)
    return _sym(
        {(2, 3): fiber * f},
        [ix22, ix22, fiber, k * one_plus_cos(x1, x2, big_r) + fiber * f * f],
    )


def glb_field(cfg: MonopoleConfig) -> Callable:
    return lambda r, tau, z, theta: glb_components(cfg, r, z)


def glb_rescaled_field(cfg: MonopoleConfig) -> Callable:
    return lambda r, tau, z, theta: glb_rescaled_components(cfg, r, z)


def gtilde_field(cfg: MonopoleConfig) -> Callable:
    return lambda x1, x2, theta, tau: gtilde_components(cfg, x1, x2)


def _cyl(p: ChartPoint) -> tuple[float, float]:
    if p.chart is not Chart.CYL_LB:
        raise DomainError("this LeBrun variant lives on the CylLB chart")
    r, _, z, _ = p.coords
    if r <= 0.0:
        raise DomainError("the LeBrun metric components need r > 0 (off the axis)")
    return r, z


def _half(p: ChartPoint) -> tuple[float, float]:
    if p.chart is not Chart.HALF_PLANE:
        raise DomainError("the tilde LeBrun metric lives on the HalfPlane chart")
    return p.coords[0], p.coords[1]


def metric_glb(cfg: MonopoleConfig, p: ChartPoint) -> MetricTensor:
    """LeBrun metric at a cylindrical point, ordered ``(r, tau, z, theta)``."""
    return MetricTensor(p, glb_components(cfg, *_cyl(p)))


def metric_glb_rescaled(cfg: MonopoleConfig, p: ChartPoint) -> MetricTensor:
    """LeBrun metric divided by ``z^2 V``."""
    return MetricTensor(p, glb_rescaled_components(cfg, *_cyl(p)))


def metric_gtilde(cfg: MonopoleConfig, p: ChartPoint) -> MetricTensor:
    """Half-plane form of the LeBrun conformal class, ordered ``(x1, x2, theta, tau)``."""
    return MetricTensor(p, gtilde_components(cfg, *_half(p)))


def conformal_factor_xy(cfg: MonopoleConfig, x1, x2):
    # 2R(R - x1) / (x2^2 z^2 V) with z^2 = (R - x1)/2 reduces to 4R / (x2^2 V)
    big_r = jet.sqrt(x1 * x1 + x2 * x2)
    return 4.0 * big_r / (x2 * x2 * potential_V_halfplane(cfg, x1, x2))


def conformal_factor(cfg: MonopoleConfig, p: ChartPoint) -> float:
    """Positive factor ``lambda`` with ``g_tilde = lambda * g_LB``."""
    return float(conformal_factor_xy(cfg, *_half(p)))
