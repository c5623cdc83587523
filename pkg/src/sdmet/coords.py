"""The quarter-plane to half-plane map ``x1 = r^2 - z^2, x2 = 2 r z``.

Both directions avoid the cancellation in ``R +/- x1`` by computing the small
one of ``r``, ``z`` from ``x2 = 2 r z``.
"""

from __future__ import annotations

import numpy as np

from . import jet
from .errors import DomainError


def to_halfplane(r, z):
    if np.any(np.asarray(jet.value_of(r)) <= 0.0) or np.any(np.asarray(jet.value_of(z)) <= 0.0):
        raise DomainError("to_halfplane needs r > 0 and z > 0")
    return r * r - z * z, 2.0 * r * z


def from_halfplane(x1: float, x2: float) -> tuple[float, float]:
    if not x2 > 0.0:
        raise DomainError(f"from_halfplane needs x2 > 0, got {x2}")
    big_r = float(np.hypot(x1, x2))
    if x1 >= 0.0:
        r = np.sqrt(0.5 * (big_r + x1))
        return float(r), float(x2 / (2.0 * r))
    z = np.sqrt(0.5 * (big_r - x1))
    return float(x2 / (2.0 * z)), float(z)


def one_minus_cos(x1, x2, big_r):
    """``1 - x1/R`` without cancellation for ``x1 > 0``."""
    if isinstance(x1, jet.Jet):
        if x1.value > 0.0:
            return x2 * x2 / (big_r * (big_r + x1))
        return (big_r - x1) / big_r
    return np.where(x1 > 0.0, x2 * x2 / (big_r * (big_r + x1)), (big_r - x1) / big_r)


def one_plus_cos(x1, x2, big_r):
    """``1 + x1/R`` without cancellation for ``x1 < 0``."""
    if isinstance(x1, jet.Jet):
        if x1.value < 0.0:
            return x2 * x2 / (big_r * (big_r - x1))
        return (big_r + x1) / big_r
    return np.where(x1 < 0.0, x2 * x2 / (big_r * (big_r - x1)), (big_r + x1) / big_r)


def pullback_jacobian(r: float, z: float) -> np.ndarray:
    """Jacobian of ``(r, tau, z, theta) -> (x1, x2, theta, tau)``; rows are new coordinates."""
    j = np.zeros((4, 4))
    j[0, 0], j[0, 2] = 2.0 * r, -2.0 * z
    j[1, 0], j[1, 2] = 2.0 * z, 2.0 * r
    j[2, 3] = 1.0
    j[3, 1] = 1.0
    return j
