"""Joyce metrics: stabilizer data, the phi-matrix and the metric tensor.

Boundary points of the half-plane are given as a tuple whose first two entries
are the markers :data:`QMarker.INFINITY` and :data:`QMarker.ZERO`, followed by
strictly decreasing negative floats. The markers are not floats on purpose:
``u`` at infinity and at zero have their own formulas.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence, Union

import numpy as np

from . import jet
from .coords import one_minus_cos
from .errors import ArgumentError, DegenerateTorusAction, DomainError, InvalidData
from .geometry import Chart, ChartPoint, MetricTensor

DEGENERACY_TOL = 1e-13


class QMarker(enum.Enum):
    INFINITY = "inf"
    ZERO = "0"

    def __repr__(self) -> str:
        return f"QMarker.{self.name}"


BoundaryPoint = Union[QMarker, float]
Pair = tuple[int, int]


def validate_stabilizer(pairs: Sequence[Sequence[int]]) -> list[str]:
    """Return the list of normalization violations (empty when the data is valid)."""
    pairs = [tuple(p) for p in pairs]
    problems = []
    k = len(pairs)
    if k < 3:
        return [f"need at least 3 pairs, got {k}"]
    for i, p in enumerate(pairs, start=1):
        if len(p) != 2 or not all(isinstance(v, int) for v in p):
            problems.append(f"pair {i} is not an integer pair: {p}")
    if problems:
        return problems
    for i, (m, n) in enumerate(pairs, start=1):
        if math.gcd(m, n) != 1:
            problems.append(f"pair {i} = ({m},{n}) is not coprime")
    for i in range(k - 1):
        (m0, n0), (m1, n1) = pairs[i], pairs[i + 1]
        det = m0 * n1 - m1 * n0
        if det != -1:
            problems.append(
                f"determinant of pairs {i + 1},{i + 2}: {m0}*{n1} - {m1}*{n0} = {det} != -1"
            )
    if pairs[0] != (0, 1):
        problems.append(f"first pair must be (0,1), got {pairs[0]}")
    if pairs[-1] != (1, 0):
        problems.append(f"last pair must be (1,0), got {pairs[-1]}")
    for i, (m, n) in enumerate(pairs[1:-1], start=2):
        if m <= 0 or n <= 0:
            problems.append(f"middle pair {i} = ({m},{n}) must have positive entries")
    return problems


@dataclass(frozen=True)
class StabilizerData:
    """Normalized stabilizer data; construction validates."""

    pairs: tuple[Pair, ...]

    def __post_init__(self):
        pairs = tuple(tuple(p) for p in self.pairs)
        problems = validate_stabilizer(pairs)
        if problems:
            raise InvalidData("; ".join(problems))
        object.__setattr__(self, "pairs", pairs)

    @property
    def k(self) -> int:
        return len(self.pairs)

    def __str__(self) -> str:
        return format_stabilizer(self.pairs)


def parse_stabilizer(text: str) -> tuple[Pair, ...]:
    """Parse ``"m,n;m,n;..."``; raises ``ValueError`` on malformed input."""
    pairs = []
    for chunk in text.strip().split(";"):
        parts = chunk.split(",")
        if len(parts) != 2:
            raise ValueError(f"expected 'm,n', got {chunk!r}")
        pairs.append((int(parts[0]), int(parts[1])))
    return tuple(pairs)


def format_stabilizer(pairs: Sequence[Pair]) -> str:
    return ";".join(f"{m},{n}" for m, n in pairs)


def semifree_data(n: int) -> StabilizerData:
    """Canonical semi-free data ``(0,1), (1,n), (1,n-1), ..., (1,0)``."""
    if n < 1:
        raise ArgumentError(f"semi-free Joyce data needs n >= 1, got {n}")
    k = n + 2
    return StabilizerData(((0, 1),) + tuple((1, k - a) for a in range(2, k + 1)))


class SemiFree(NamedTuple):
    semifree: bool
    witnesses: tuple[Pair, ...]

    def __bool__(self) -> bool:
        return self.semifree


def is_semifree(pairs) -> SemiFree:
    """Decide whether a circle subgroup acts semi-freely.

    The witness ``(0, 1)`` stands for G(0,1) and applies when every middle
    pair has ``m = 1``; ``(1, 0)`` stands for G(1,0) and applies when every
    middle pair has ``n = 1``.
    """
    data = pairs if isinstance(pairs, StabilizerData) else StabilizerData(tuple(pairs))
    middle = data.pairs[1:-1]
    witnesses = []
    if all(m == 1 for m, _ in middle):
        witnesses.append((0, 1))
    if all(n == 1 for _, n in middle):
        witnesses.append((1, 0))
    return SemiFree(bool(witnesses), tuple(witnesses))


@dataclass(frozen=True)
class JoyceConfig:
    stab: StabilizerData
    boundary_points: tuple[BoundaryPoint, ...]

    def __post_init__(self):
        pts = tuple(self.boundary_points)
        if len(pts) != self.stab.k:
            raise InvalidData(f"{self.stab.k} stabilizer pairs but {len(pts)} boundary points")
        if pts[0] is not QMarker.INFINITY or pts[1] is not QMarker.ZERO:
            raise InvalidData("boundary points must start with INFINITY, ZERO")
        finite = [float(q) for q in pts[2:]]
        if not all(math.isfinite(q) for q in finite):
            raise InvalidData("finite boundary points must be finite")
        chain = [0.0] + finite
        if any(b >= a for a, b in zip(chain, chain[1:])):
            raise InvalidData(f"boundary points must strictly decrease: {finite}")
        object.__setattr__(self, "boundary_points", pts[:2] + tuple(finite))

    @classmethod
    def semifree(cls, finite_points: Sequence[float]) -> "JoyceConfig":
        """Canonical semi-free data with boundary points ``inf, 0, *finite_points``."""
        n = len(finite_points)
        return cls(semifree_data(n), (QMarker.INFINITY, QMarker.ZERO) + tuple(finite_points))

    @property
    def k(self) -> int:
        return self.stab.k

    @property
    def finite_points(self) -> tuple[float, ...]:
        return self.boundary_points[2:]

    def is_canonical_semifree(self) -> bool:
        return self.stab.pairs == semifree_data(self.k - 2).pairs


def _check_x2(x2) -> None:
    if not np.all(np.asarray(jet.value_of(x2)) > 0.0):
        raise DomainError("need x2 > 0")


def u_function(q: BoundaryPoint, x1, x2):
    """The R^2-valued function attached to boundary point ``q``."""
    _check_x2(x2)
    if q is QMarker.INFINITY:
        return (0.0, -1.0)
    if q is QMarker.ZERO:
        big_r = jet.sqrt(x1 * x1 + x2 * x2)
        return (x2 / big_r, x1 / big_r)
    rho = jet.sqrt((x1 - q) * (x1 - q) + x2 * x2)
    return (x2 / rho, (x1 - q) / rho)


@dataclass(frozen=True)
class PhiMatrix:
    """``[[a1, b1], [a2, b2]]``; ``a`` pairs with ``dy1`` and ``b`` with ``dy2``."""

    a1: object
    a2: object
    b1: object
    b2: object

    @property
    def det(self):
        return self.a1 * self.b2 - self.a2 * self.b1

    def as_array(self) -> np.ndarray:
        return np.array(
            [[jet.value_of(self.a1), jet.value_of(self.b1)], [jet.value_of(self.a2), jet.value_of(self.b2)]],
            dtype=float,
        )


def phi_general(cfg: JoyceConfig, x1, x2) -> PhiMatrix:
    """phi for arbitrary normalized data, summed over the boundary points."""
    us = [u_function(q, x1, x2) for q in cfg.boundary_points]
    a = [0.0, 0.0]
    b = [0.0, 0.0]
    k = cfg.k
    for alpha in range(k):
        m, n = cfg.stab.pairs[alpha]
        u0 = us[alpha]
        if alpha < k - 1:
            u1 = us[alpha + 1]
            w = ((u0[0] - u1[0]) * 0.5, (u0[1] - u1[1]) * 0.5)
        else:
            u1 = us[0]
            w = ((u0[0] + u1[0]) * 0.5, (u0[1] + u1[1]) * 0.5)
        for i in range(2):
            if m:
                a[i] = a[i] + w[i] * m
            if n:
                b[i] = b[i] + w[i] * n
    return PhiMatrix(a[0], a[1], b[0], b[1])


def phi_semifree(cfg: JoyceConfig, x1, x2) -> PhiMatrix:
    """Closed form of phi for canonical semi-free data."""
    if not cfg.is_canonical_semifree():
        raise InvalidData("phi_semifree needs the canonical semi-free stabilizer data")
    _check_x2(x2)
    big_r = jet.sqrt(x1 * x1 + x2 * x2)
    m = cfg.k - 3
    s1 = 0.0
    s2 = 0.0
    for q in cfg.finite_points:
        rho = jet.sqrt((x1 - q) * (x1 - q) + x2 * x2)
        s1 = s1 + x2 / rho
        s2 = s2 + (x1 - q) / rho
    return PhiMatrix(
        a1=0.5 * x2 / big_r,
        a2=-0.5 * one_minus_cos(x1, x2, big_r),
        b1=0.5 * (m * x2 / big_r - s1),
        b2=0.5 * (m * x1 / big_r - s2 - 1.0),
    )


def phi(cfg: JoyceConfig, x1, x2) -> PhiMatrix:
    if cfg.is_canonical_semifree():
        return phi_semifree(cfg, x1, x2)
    return phi_general(cfg, x1, x2)


def joyce_components(cfg: JoyceConfig, x1, x2) -> list:
    ph = phi(cfg, x1, x2)
    a1, a2, b1, b2 = ph.a1, ph.a2, ph.b1, ph.b2
    det = ph.det
    na = math.hypot(jet.value_of(a1), jet.value_of(a2))
    nb = math.hypot(jet.value_of(b1), jet.value_of(b2))
    if abs(jet.value_of(det)) < DEGENERACY_TOL * na * nb or jet.value_of(det) == 0.0:
        raise DegenerateTorusAction(f"phi determinant {jet.value_of(det)} is numerically zero")
    idet2 = 1.0 / (det * det)
    ix22 = 1.0 / (x2 * x2)
    g12 = -(a1 * b1 + a2 * b2) * idet2
    return [
        [ix22, 0.0, 0.0, 0.0],
        [0.0, ix22, 0.0, 0.0],
        [0.0, 0.0, (a1 * a1 + a2 * a2) * idet2, g12],
        [0.0, 0.0, g12, (b1 * b1 + b2 * b2) * idet2],
    ]


def joyce_field(cfg: JoyceConfig):
    return lambda x1, x2, y1, y2: joyce_components(cfg, x1, x2)


def metric_joyce(cfg: JoyceConfig, p: ChartPoint) -> MetricTensor:
    """Joyce metric at a half-plane point, ordered ``(x1, x2, y1, y2)``."""
    if p.chart is not Chart.HALF_PLANE:
        raise DomainError("the Joyce metric lives on the HalfPlane chart")
    return MetricTensor(p, joyce_components(cfg, p.coords[0], p.coords[1]))
