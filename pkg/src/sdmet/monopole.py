"""Hyperbolic monopole data for toric configurations.

Monopole points sit on the z-axis geodesic of hyperbolic 3-space at heights
``0 < c_1 < ... < c_n``. Everything here is closed form; the functions accept
floats, numpy arrays or jets for the coordinates, so they can be fed straight
into the derivative engine.

The radicand ``(c^2 + r^2 + z^2)^2 - 4 c^2 z^2`` is evaluated in the factored
form ``(r^2 + (z - c)^2) (r^2 + (z + c)^2)``, which stays accurate close to
the pole where the expanded difference cancels catastrophically.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import jet
from .errors import ArgumentError, DomainError, SingularPoint
from .geometry import ChartPoint, hodge_star_h3, jet_evaluate

# Euclidean distance below which a query counts as sitting on a pole
POLE_TOL = 1e-12
# the connection identity degenerates with dtau on the axis
AXIS_EXCLUSION = 1e-6


@dataclass(frozen=True)
class MonopoleConfig:
    """Strictly increasing positive monopole heights on the z-axis."""

    heights: tuple[float, ...] = ()

    def __post_init__(self):
        h = tuple(float(c) for c in self.heights)
        if not all(math.isfinite(c) and c > 0.0 for c in h):
            raise ArgumentError(f"heights must be finite and positive: {h}")
        if any(b <= a for a, b in zip(h, h[1:])):
            raise ArgumentError(f"heights must be strictly increasing: {h}")
        object.__setattr__(self, "heights", h)

    @property
    def n(self) -> int:
        return len(self.heights)

    def boundary_images(self) -> tuple[float, ...]:
        """Half-plane boundary points ``q_alpha = -c_{alpha-2}^2``, alpha = 3..n+2."""
        return tuple(-c * c for c in self.heights)


@dataclass(frozen=True)
class AxisInterval:
    """Open piece ``(lower, upper)`` of the z-axis between consecutive monopoles.

    ``upper`` is ``None`` for the unbounded last interval.
    """

    alpha: int
    lower: float
    upper: float | None

    def contains(self, z: float) -> bool:
        return z > self.lower and (self.upper is None or z < self.upper)

    def midpoint(self) -> float:
        if self.upper is None:
            return 2.0 * self.lower if self.lower > 0.0 else 1.0
        return 0.5 * (self.lower + self.upper)


def axis_intervals(cfg: MonopoleConfig) -> list[AxisInterval]:
    bounds = (0.0,) + cfg.heights
    out = [AxisInterval(a + 1, bounds[a], cfg.heights[a]) for a in range(cfg.n)]
    out.append(AxisInterval(cfg.n + 1, bounds[-1], None))
    return out


def _check_pole(c: float, r, z) -> None:
    rv, zv = jet.value_of(r), jet.value_of(z)
    d2 = np.asarray(rv, dtype=float) ** 2 + (np.asarray(zv, dtype=float) - c) ** 2
    if np.any(d2 < POLE_TOL * POLE_TOL):
        raise SingularPoint(f"query at the monopole point (0, {c})")


def _check_upper(r, z) -> None:
    if np.any(np.asarray(jet.value_of(z)) <= 0.0) or np.any(np.asarray(jet.value_of(r)) < 0.0):
        raise DomainError("need r >= 0 and z > 0")


def _radical(c: float, r, z):
    r2 = r * r
    return jet.sqrt((r2 + (z - c) * (z - c)) * (r2 + (z + c) * (z + c)))


def green(c: float, r, z):
    """Green's function of hyperbolic 3-space with pole at height ``c`` on the axis.

    Equal to ``-1/2 + (1/2) [1 - 4 c^2 z^2 / (r^2 + z^2 + c^2)^2]^(-1/2)``;
    positive, blowing up at the pole and decaying to 0 at infinity.
    """
    _check_upper(r, z)
    _check_pole(c, r, z)
    return 0.5 * (r * r + z * z + c * c) / _radical(c, r, z) - 0.5


def potential_V(cfg: MonopoleConfig, r, z):
    """``V = 1 + sum_alpha green(c_alpha, r, z)``."""
    v = 1.0
    for c in cfg.heights:
        v = v + green(c, r, z)
    return v


def flux_fc(c: float, r, z):
    """Flux function of one monopole; takes values in ``(-1, 0)``.

    On the axis it equals -1 below the monopole and 0 above it.
    """
    _check_upper(r, z)
    _check_pole(c, r, z)
    return 0.5 * (r * r + z * z - c * c) / _radical(c, r, z) - 0.5


def flux_f(cfg: MonopoleConfig, r, z):
    f = 0.0
    for c in cfg.heights:
        f = f + flux_fc(c, r, z)
    return f


def local_connection_coeff(cfg: MonopoleConfig, alpha: int, r, z):
    """Coefficient ``f + n + 1 - alpha`` of ``i dtau`` in the local connection form.

    It vanishes on the axis interval ``alpha``, so the form extends over it.
    """
    if not 1 <= alpha <= cfg.n + 1:
        raise ArgumentError(f"alpha must lie in [1, {cfg.n + 1}], got {alpha}")
    return flux_f(cfg, r, z) + (cfg.n + 1 - alpha)


def transition(alpha: int, beta: int, tau: float) -> complex:
    """Circle-bundle transition function ``exp(i (beta - alpha) tau)``."""
    if alpha < 1 or beta < 1:
        raise ArgumentError("interval indices start at 1")
    return cmath.exp(1j * (beta - alpha) * tau)


def _check_halfplane(qs: Sequence[float], x1, x2) -> None:
    x1v = np.asarray(jet.value_of(x1), dtype=float)
    x2v = np.asarray(jet.value_of(x2), dtype=float)
    if np.any(x2v < 0.0):
        raise DomainError("need x2 >= 0")
    for q in qs:
        if np.any((x1v - q) ** 2 + x2v**2 < POLE_TOL * POLE_TOL):
            raise SingularPoint(f"query at the boundary image ({q}, 0)")


def potential_V_halfplane(cfg: MonopoleConfig, x1, x2):
    """``V = 1 - n/2 + sum (R - q_a) / (2 r_a)`` in half-plane coordinates."""
    qs = cfg.boundary_images()
    _check_halfplane(qs, x1, x2)
    big_r = jet.sqrt(x1 * x1 + x2 * x2)
    v = 1.0 - 0.5 * cfg.n
    for q in qs:
        v = v + (big_r - q) / (2.0 * jet.sqrt((x1 - q) * (x1 - q) + x2 * x2))
    return v


def flux_f_halfplane(cfg: MonopoleConfig, x1, x2):
    """``f = -n/2 + sum (R + q_a) / (2 r_a)`` in half-plane coordinates."""
    qs = cfg.boundary_images()
    _check_halfplane(qs, x1, x2)
    big_r = jet.sqrt(x1 * x1 + x2 * x2)
    f = -0.5 * cfg.n
    for q in qs:
        f = f + (big_r + q) / (2.0 * jet.sqrt((x1 - q) * (x1 - q) + x2 * x2))
    return f


def verify_connection_identity(cfg: MonopoleConfig, r: float, z: float) -> np.ndarray:
    """Componentwise ``d(f dtau) - *dV`` in the basis ``(dtau^dz, dz^dr, dr^dtau)``."""
    if not r > AXIS_EXCLUSION:
        raise DomainError(f"connection identity needs r > {AXIS_EXCLUSION}, got r = {r}")
    p = ChartPoint.cyl(r, 0.0, z, 0.0)
    df = jet_evaluate(lambda r_, t_, z_, th_: flux_f(cfg, r_, z_), p, order=1).grad
    dv = jet_evaluate(lambda r_, t_, z_, th_: potential_V(cfg, r_, z_), p, order=1).grad
    # d(f dtau) = f_r dr^dtau + f_z dz^dtau
    d_f_dtau = np.array([-df[2], 0.0, df[0]])
    star_dv = hodge_star_h3(dv[:3], p)
    return d_f_dtau - star_dv
