"""Identification of toric LeBrun data with semi-free Joyce data, and
pointwise verification campaigns.

A monopole configuration with heights ``c_1 < ... < c_n`` corresponds to Joyce
data with boundary points ``inf, 0, -c_1^2, ..., -c_n^2`` and the canonical
semi-free stabilizer data. Under ``(x1, x2, theta, tau) -> (x1, x2, y1, y2)``
the half-plane LeBrun metric and the Joyce metric coincide; the checks below
evaluate each identity on random samples and report residual statistics.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .coords import from_halfplane, pullback_jacobian, to_halfplane
from .curvature import asd_ratio, curvature
from .errors import ArgumentError, DomainError
from .geometry import ChartPoint
from .joyce import JoyceConfig, joyce_components, joyce_field, phi_semifree
from .lebrun import conformal_factor_xy, glb_components, glb_field, gtilde_components, gtilde_field
from .monopole import (
    MonopoleConfig,
    flux_f,
    flux_f_halfplane,
    potential_V,
    potential_V_halfplane,
    verify_connection_identity,
)
from .report import CheckResult, VerificationReport

__all__ = [
    "CHECKS",
    "DEFAULT_TOLERANCES",
    "Identification",
    "SampleSpec",
    "from_halfplane",
    "to_halfplane",
    "verify_lemma",
    "verify_theorem",
    "pullback_residual",
    "cross_chart_residual",
    "random_heights",
    "resolve_workers",
    "run_campaign",
]

CHECKS = ("lemma", "theorem", "connection", "scalar_flat", "asd", "cross_chart")

DEFAULT_TOLERANCES = {
    "lemma": 1e-13,
    "theorem": 1e-10,
    "connection": 1e-9,
    "scalar_flat": 1e-5,
    "asd": 1e-5,
    "cross_chart": 1e-12,
}

# Weyl norm below which the asd check skips a point
ASD_WEYL_FLOOR = 1e-8


@dataclass(frozen=True)
class Identification:
    """A monopole configuration together with its semi-free Joyce counterpart."""

    cfg: MonopoleConfig
    joyce: JoyceConfig = field(init=False, repr=False)

    def __post_init__(self):
        if self.cfg.n < 1:
            raise ArgumentError("the Joyce side needs n >= 1 (k = n + 2 >= 3)")
        object.__setattr__(self, "joyce", JoyceConfig.semifree(self.cfg.boundary_images()))

    @classmethod
    def from_heights(cls, heights: Sequence[float]) -> "Identification":
        return cls(MonopoleConfig(tuple(heights)))

    @property
    def boundary_points(self):
        return self.joyce.boundary_points


def verify_lemma(ident: Identification, x1: float, x2: float) -> float:
    """``a1 b2 - a2 b1 + x2 V / (2R)``, which vanishes identically."""
    if not x2 > 0.0:
        raise DomainError(f"need x2 > 0, got {x2}")
    det = phi_semifree(ident.joyce, x1, x2).det
    v = potential_V_halfplane(ident.cfg, x1, x2)
    return float(det + x2 * v / (2.0 * math.hypot(x1, x2)))


def verify_theorem(ident: Identification, x1: float, x2: float) -> np.ndarray:
    """Relative residuals of ``g_11 = gt_thth``, ``g_12 = gt_thtau``, ``g_22 = gt_tautau``.

    Each difference is divided by ``1 + |gt component|``.
    """
    if not x2 > 0.0:
        raise DomainError(f"need x2 > 0, got {x2}")
    gj = np.asarray(joyce_components(ident.joyce, x1, x2), dtype=float)[2:, 2:]
    gt = np.asarray(gtilde_components(ident.cfg, x1, x2), dtype=float)[2:, 2:]
    idx = [(0, 0), (0, 1), (1, 1)]
    return np.array([(gj[i] - gt[i]) / (1.0 + abs(gt[i])) for i in idx])


def pullback_residual(cfg: MonopoleConfig, r: float, z: float) -> float:
    """Max entrywise relative gap between ``g_LB`` and the pulled-back ``g_tilde / lambda``."""
    x1, x2 = to_halfplane(r, z)
    gt = np.asarray(gtilde_components(cfg, x1, x2), dtype=float)
    jac = pullback_jacobian(r, z)
    pulled = jac.T @ gt @ jac / float(conformal_factor_xy(cfg, x1, x2))
    glb = np.asarray(glb_components(cfg, r, z), dtype=float)
    return float(np.max(np.abs(pulled - glb) / (1.0 + np.abs(glb))))


def cross_chart_residual(cfg: MonopoleConfig, r, z) -> np.ndarray:
    """``max(|dV|, |df|)`` between the cylindrical and half-plane closed forms."""
    x1, x2 = to_halfplane(r, z)
    dv = np.abs(potential_V_halfplane(cfg, x1, x2) - potential_V(cfg, r, z))
    df = np.abs(flux_f_halfplane(cfg, x1, x2) - flux_f(cfg, r, z))
    return np.maximum(dv, df)


@dataclass(frozen=True)
class SampleSpec:
    """Random half-plane samples avoiding the boundary images of the monopoles.

    ``x1_range=None`` picks ``(-L, L)`` with ``L = max(20, 1.25 c_n^2)`` so that
    every boundary image is inside the window.

    Curvature checks only use samples with ``x2 / R >= generic_sine``. Closer to
    the boundary (the z-axis and the plane at infinity of the cylindrical
    picture) the torus fiber block degenerates like ``(x2 / R)^2`` and the
    second derivatives lose roughly ``6 log10(R / x2)`` digits.
    """

    count: int = 100
    seed: int = 0
    x1_range: tuple[float, float] | None = None
    x2_range: tuple[float, float] = (0.05, 20.0)
    exclusion: float = 0.05
    generic_sine: float = 0.1

    def __post_init__(self):
        if self.count < 1:
            raise ArgumentError("sample count must be positive")
        lo, hi = self.x2_range
        if not 0.0 < lo < hi:
            raise ArgumentError(f"x2 range must satisfy 0 < lo < hi, got {self.x2_range}")
        if self.x1_range is not None and not self.x1_range[0] < self.x1_range[1]:
            raise ArgumentError(f"empty x1 range {self.x1_range}")
        if self.exclusion < 0.0:
            raise ArgumentError("exclusion radius must be nonnegative")
        if not 0.0 <= self.generic_sine < 1.0:
            raise ArgumentError("generic_sine must lie in [0, 1)")

    def resolved_x1_range(self, cfg: MonopoleConfig) -> tuple[float, float]:
        if self.x1_range is not None:
            return tuple(self.x1_range)
        span = max(20.0, 1.25 * max((c * c for c in cfg.heights), default=0.0))
        return (-span, span)

    def draw(self, cfg: MonopoleConfig) -> np.ndarray:
        """``(count, 4)`` array of ``(x1, x2, angle1, angle2)``; deterministic in ``seed``."""
        rng = np.random.default_rng(self.seed)
        lo1, hi1 = self.resolved_x1_range(cfg)
        lo2, hi2 = self.x2_range
        qs = np.array(cfg.boundary_images())
        out = []
        have = 0
        for _ in range(1000):
            batch = max(self.count, 64)
            x1 = rng.uniform(lo1, hi1, batch)
            x2 = rng.uniform(lo2, hi2, batch)
            ang = rng.uniform(0.0, 2.0 * math.pi, (batch, 2))
            keep = np.ones(batch, dtype=bool)
            for q in qs:
                keep &= np.hypot(x1 - q, x2) > self.exclusion
            pts = np.column_stack([x1, x2, ang])[keep]
            out.append(pts)
            have += len(pts)
            if have >= self.count:
                break
        else:
            raise ArgumentError("exclusion zones cover the sampling window")
        return np.concatenate(out)[: self.count]


def random_heights(rng: np.random.Generator, n: int, low: float = 0.1, high: float = 10.0) -> tuple[float, ...]:
    """``n`` distinct heights drawn log-uniformly from ``(low, high)``, sorted."""
    while True:
        h = np.sort(np.exp(rng.uniform(math.log(low), math.log(high), n)))
        if np.all(np.diff(h) > 0.0):
            return tuple(float(c) for c in h)


def resolve_workers(requested: int | None = None) -> int:
    """Worker count, capped by the ``SDMET_THREADS`` environment variable."""
    n = requested if requested is not None else (os.cpu_count() or 1)
    cap = os.environ.get("SDMET_THREADS")
    if cap:
        n = min(n, max(1, int(cap)))
    return max(1, n)


# -- per-point residuals; module level so they pickle into worker processes


def _lemma(ident, pt):
    return abs(verify_lemma(ident, pt[0], pt[1]))


def _theorem(ident, pt):
    return float(np.max(np.abs(verify_theorem(ident, pt[0], pt[1]))))


def _connection(ident, pt):
    r, z = from_halfplane(pt[0], pt[1])
    return float(np.max(np.abs(verify_connection_identity(ident.cfg, r, z))))


def _scalar_flat(ident, pt):
    r, z = from_halfplane(pt[0], pt[1])
    return abs(curvature(glb_field(ident.cfg), ChartPoint.cyl(r, pt[3], z, pt[2])).scalar)


def _asd(ident, pt):
    p = ChartPoint.halfplane(*pt)
    worst = 0.0
    for fld in (gtilde_field(ident.cfg), joyce_field(ident.joyce)):
        res = asd_ratio(fld, p, threshold=ASD_WEYL_FLOOR)
        if res.negligible:
            return math.nan
        worst = max(worst, res.best)
    return worst


def _cross_chart(ident, pt):
    r, z = from_halfplane(pt[0], pt[1])
    return float(cross_chart_residual(ident.cfg, r, z))


_RESIDUALS = {
    "lemma": _lemma,
    "theorem": _theorem,
    "connection": _connection,
    "scalar_flat": _scalar_flat,
    "asd": _asd,
    "cross_chart": _cross_chart,
}
_HEAVY = {"scalar_flat", "asd"}


def _chunk(args):
    name, heights, pts = args
    ident = Identification.from_heights(heights)
    fn = _RESIDUALS[name]
    return [fn(ident, pt) for pt in pts]


def residuals(name: str, ident: Identification, pts: np.ndarray, workers: int = 1) -> np.ndarray:
    """Per-point residuals of one check; NaN marks a skipped point (asd only)."""
    if name not in _RESIDUALS:
        raise ArgumentError(f"unknown check {name!r}; choose from {', '.join(CHECKS)}")
    if workers > 1 and name in _HEAVY and len(pts) >= 2 * workers:
        chunks = np.array_split(pts, workers)
        jobs = [(name, ident.cfg.heights, c) for c in chunks]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_chunk, jobs))
        return np.array([v for part in parts for v in part], dtype=float)
    return np.array(_chunk((name, ident.cfg.heights, pts)), dtype=float)


def run_campaign(
    ident: Identification,
    spec: SampleSpec,
    checks: Iterable[str] = CHECKS,
    tolerances: dict | None = None,
    workers: int | None = None,
    command: Sequence[str] = (),
) -> VerificationReport:
    """Evaluate the requested checks on one shared, seeded sample set.

    The result depends only on ``ident``, ``spec``, ``checks`` and the
    tolerances; ``workers`` changes the schedule, never the numbers.
    """
    checks = [c for c in CHECKS if c in set(checks)] + sorted(set(checks) - set(CHECKS))
    tol = dict(DEFAULT_TOLERANCES)
    tol.update(tolerances or {})
    nworkers = resolve_workers(workers)
    pts = spec.draw(ident.cfg) if checks else np.empty((0, 4))
    results = []
    generic = pts[:, 1] >= spec.generic_sine * np.hypot(pts[:, 0], pts[:, 1])
    for name in checks:
        if name in _HEAVY:
            res = residuals(name, ident, pts[generic], nworkers)
            used = res[~np.isnan(res)]
            skipped = len(pts) - used.size
        else:
            res = residuals(name, ident, pts, nworkers)
            used, skipped = res, 0
        # NaN propagates, so a failed evaluation can never pass
        if used.size:
            max_res, mean_res = float(np.max(used)), float(np.mean(used))
        else:
            max_res = mean_res = math.nan
        results.append(CheckResult(name, int(used.size), max_res, mean_res, float(tol[name]), skipped))
    lo1, hi1 = spec.resolved_x1_range(ident.cfg)
    config = {
        "heights": list(ident.cfg.heights),
        "n": ident.cfg.n,
        "samples": spec.count,
        "seed": spec.seed,
        "x1_range": [lo1, hi1],
        "x2_range": list(spec.x2_range),
        "exclusion": spec.exclusion,
        "generic_sine": spec.generic_sine,
    }
    return VerificationReport(tuple(results), config, tuple(command))
