"""Charts, points, metric containers and hyperbolic 3-space operators.

Two charts are supported:

``CYL_LB``
    cylindrical coordinates ``(r, tau, z, theta)`` on hyperbolic 3-space times
    the circle fiber; ``r >= 0``, ``z > 0``; ``tau`` and ``theta`` are angles.
``HALF_PLANE``
    ``(x1, x2, y1, y2)`` on the upper half-plane times a 2-torus; ``x2 > 0``;
    ``y1``, ``y2`` are angles.

A *field on a chart* is any callable taking the four coordinates (floats or
:class:`~sdmet.jet.Jet` objects) and returning a scalar built from arithmetic
and the functions in :mod:`sdmet.jet`. :func:`jet_evaluate` differentiates such
fields exactly by forward-mode propagation.

Hyperbolic 3-space is oriented by ``dx ^ dy ^ dz = r dr ^ dtau ^ dz``. With
``g = (dr^2 + r^2 dtau^2 + dz^2) / z^2`` the Hodge star on 1-forms is::

    *dr   = (r / z)      dtau ^ dz
    *dtau = 1 / (r z)    dz ^ dr
    *dz   = (r / z)      dr ^ dtau

and on 2-forms the inverse map, so ``** = +1`` in both degrees.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import jet
from .errors import DomainError

TWO_PI = 2.0 * math.pi


class Chart(enum.Enum):
    CYL_LB = "CylLB"
    HALF_PLANE = "HalfPlane"

    @property
    def coordinate_names(self) -> tuple[str, str, str, str]:
        if self is Chart.CYL_LB:
            return ("r", "tau", "z", "theta")
        return ("x1", "x2", "y1", "y2")

    @property
    def angular(self) -> tuple[int, int]:
        return (1, 3) if self is Chart.CYL_LB else (2, 3)


def reduce_angle(a: float) -> float:
    a = math.fmod(float(a), TWO_PI)
    if a < 0.0:
        a += TWO_PI
    # fmod of a tiny negative can round up to exactly 2*pi
    return 0.0 if a >= TWO_PI else a


def check_domain(chart: Chart, coords: Sequence[float]) -> None:
    c = [float(v) for v in coords]
    if len(c) != 4:
        raise DomainError(f"expected 4 coordinates, got {len(c)}")
    if not all(math.isfinite(v) for v in c):
        raise DomainError(f"non-finite coordinate in {c}")
    if chart is Chart.CYL_LB:
        if c[0] < 0.0:
            raise DomainError(f"r must be >= 0, got {c[0]}")
        if c[2] <= 0.0:
            raise DomainError(f"z must be > 0, got {c[2]}")
    elif c[1] <= 0.0:
        raise DomainError(f"x2 must be > 0, got {c[1]}")


@dataclass(frozen=True)
class ChartPoint:
    """A chart tag plus four coordinates; angles are stored in ``[0, 2 pi)``."""

    chart: Chart
    coords: tuple[float, float, float, float]

    def __post_init__(self):
        check_domain(self.chart, self.coords)
        c = [float(v) for v in self.coords]
        for i in self.chart.angular:
            c[i] = reduce_angle(c[i])
        object.__setattr__(self, "coords", tuple(c))

    @classmethod
    def cyl(cls, r, tau, z, theta) -> "ChartPoint":
        return cls(Chart.CYL_LB, (r, tau, z, theta))

    @classmethod
    def halfplane(cls, x1, x2, y1, y2) -> "ChartPoint":
        return cls(Chart.HALF_PLANE, (x1, x2, y1, y2))

    def __iter__(self):
        return iter(self.coords)


@dataclass(frozen=True)
class MetricTensor:
    """Symmetric 4x4 component matrix in the coordinate basis of ``at.chart``."""

    at: ChartPoint
    g: np.ndarray = field(repr=False)

    def __post_init__(self):
        g = np.array(self.g, dtype=float)
        if g.shape != (4, 4):
            raise ValueError(f"metric must be 4x4, got shape {g.shape}")
        # average with the transpose: the result is bitwise symmetric
        g = 0.5 * (g + g.T)
        g.flags.writeable = False
        object.__setattr__(self, "g", g)

    def is_positive_definite(self) -> bool:
        return bool(np.all(np.linalg.eigvalsh(self.g) > 0.0))

    def component(self, i: str, j: str) -> float:
        names = self.at.chart.coordinate_names
        return float(self.g[names.index(i), names.index(j)])


@dataclass(frozen=True)
class Jet2:
    """Value, gradient and Hessian of a scalar field at a point."""

    value: float
    grad: np.ndarray | None = None
    hess: np.ndarray | None = None


def jet_evaluate(fld: Callable, p: ChartPoint, order: int = 2) -> Jet2:
    """Evaluate ``fld`` and its partials up to ``order`` (0, 1 or 2) at ``p``."""
    if order not in (0, 1, 2):
        raise ValueError(f"order must be 0, 1 or 2, got {order}")
    if not isinstance(p, ChartPoint):
        raise DomainError(f"expected a ChartPoint, got {type(p).__name__}")
    if order == 0:
        return Jet2(float(jet.value_of(fld(*p.coords))))
    out = jet.lift(fld(*jet.seed(p.coords)), 4)
    hess = 0.5 * (out.hess + out.hess.T) if order == 2 else None
    return Jet2(out.value, out.grad.copy(), hess)


def _require_cyl(p: ChartPoint) -> tuple[float, float]:
    if not isinstance(p, ChartPoint) or p.chart is not Chart.CYL_LB:
        raise DomainError("hyperbolic 3-space operators need a CylLB point")
    r, _, z, _ = p.coords
    return r, z


def laplacian_h3(fld: Callable, p: ChartPoint) -> float:
    """Laplace-Beltrami operator of hyperbolic 3-space applied to ``fld`` at ``p``.

    In cylindrical coordinates::

        Lap u = z^2 (u_rr + u_r / r + u_tautau / r^2 + u_zz) - z u_z

    On the axis ``r = 0`` the field is taken to be axially symmetric and the
    regular limit ``u_r / r -> u_rr`` is used.
    """
    r, z = _require_cyl(p)
    j = jet_evaluate(fld, p, order=2)
    g, h = j.grad, j.hess
    if r > 0.0:
        flat = h[0, 0] + g[0] / r + h[1, 1] / (r * r) + h[2, 2]
    else:
        flat = 2.0 * h[0, 0] + h[2, 2]
    return float(z * z * flat - z * g[2])


def hodge_star_h3(omega: Sequence[float], p: ChartPoint, degree: int = 1) -> np.ndarray:
    """Hodge star of hyperbolic 3-space at ``p``.

    ``degree=1``: ``omega = (w_r, w_tau, w_z)`` in the basis ``(dr, dtau, dz)``;
    returns 2-form components in the basis ``(dtau^dz, dz^dr, dr^dtau)``.
    ``degree=2``: the inverse direction, same bases swapped.
    """
    r, z = _require_cyl(p)
    if r <= 0.0:
        raise DomainError("Hodge star in cylindrical components needs r > 0")
    w = np.asarray(omega, dtype=float)
    if w.shape != (3,):
        raise ValueError("expected 3 components")
    scale = np.array([r / z, 1.0 / (r * z), r / z])
    if degree == 1:
        return w * scale
    if degree == 2:
        return w / scale
    raise ValueError(f"degree must be 1 or 2, got {degree}")
