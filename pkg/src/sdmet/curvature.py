"""Levi-Civita curvature of a metric field from exact second derivatives.

A *metric field* is a callable taking four coordinates (floats or jets) and
returning a nested 4x4 list of components. Derivatives come from the jet
engine, so Christoffel symbols and curvature carry only rounding error.

Index conventions::

    Gamma[i, j, k]   = Gamma^i_{jk}
    riemann[a,b,c,d] = R^a_{bcd} = d_c Gamma^a_{db} - d_d Gamma^a_{cb}
                                   + Gamma^a_{ce} Gamma^e_{db} - Gamma^a_{de} Gamma^e_{cb}
    ricci[b, d]      = R^a_{bad}

The self-dual/anti-self-dual split treats the Weyl tensor as a symmetric
operator on 2-forms in an orthonormal coframe obtained from the Cholesky
factor of ``g`` (Gram-Schmidt on the coordinate coframe), which is positively
oriented with respect to the chart coordinates.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from . import jet
from .errors import SingularMetric
from .geometry import ChartPoint

COND_LIMIT = 1e12
NEGLIGIBLE_WEYL = 1e-10

# 2-form basis e^01, e^02, e^03, e^23, e^31, e^12; the star swaps the halves
_PAIRS = ((0, 1), (0, 2), (0, 3), (2, 3), (3, 1), (1, 2))
_STAR = np.block([[np.zeros((3, 3)), np.eye(3)], [np.eye(3), np.zeros((3, 3))]])


class Orientation(enum.IntEnum):
    """Sign relative to the chart's coordinate volume form."""

    POSITIVE = 1
    NEGATIVE = -1


@dataclass(frozen=True)
class MetricJets:
    g: np.ndarray
    dg: np.ndarray  # dg[i, j, k] = d_k g_ij
    ddg: np.ndarray  # ddg[i, j, k, l] = d_k d_l g_ij
    ginv: np.ndarray


def metric_jets(metric_field: Callable, p: ChartPoint) -> MetricJets:
    comps = metric_field(*jet.seed(p.coords, order=1))
    g, dg, ddg = jet.stack(comps, 4)
    g = 0.5 * (g + g.T)
    dg = 0.5 * (dg + dg.transpose(1, 0, 2))
    ddg = 0.5 * (ddg + ddg.transpose(1, 0, 2, 3))
    ddg = 0.5 * (ddg + ddg.transpose(0, 1, 3, 2))
    if not np.all(np.isfinite(g)) or np.linalg.cond(g) > COND_LIMIT:
        raise SingularMetric(f"metric is numerically singular at {p.coords}")
    ginv = np.linalg.inv(g)
    ginv = 0.5 * (ginv + ginv.T)
    return MetricJets(g, dg, ddg, ginv)


def _gamma_lower(dg: np.ndarray) -> np.ndarray:
    # [l, j, k] = (d_j g_lk + d_k g_lj - d_l g_jk) / 2
    return 0.5 * (dg.transpose(0, 2, 1) + dg - dg.transpose(2, 0, 1))


def _christoffel(m: MetricJets) -> np.ndarray:
    gam = np.einsum("il,ljk->ijk", m.ginv, _gamma_lower(m.dg))
    return 0.5 * (gam + gam.transpose(0, 2, 1))


def christoffel(metric_field: Callable, p: ChartPoint) -> np.ndarray:
    """Christoffel symbols ``Gamma^i_{jk}``, symmetric in ``j, k``."""
    return _christoffel(metric_jets(metric_field, p))


def _riemann(m: MetricJets, gam: np.ndarray) -> np.ndarray:
    low = _gamma_lower(m.dg)
    # d_m of the lowered symbols: [l, j, k, m]
    dlow = 0.5 * (m.ddg.transpose(0, 2, 1, 3) + m.ddg - m.ddg.transpose(2, 0, 1, 3))
    dginv = -np.einsum("ia,abm,bl->ilm", m.ginv, m.dg, m.ginv)
    # dgam[i, j, k, m] = d_m Gamma^i_{jk}
    dgam = np.einsum("ilm,ljk->ijkm", dginv, low) + np.einsum("il,ljkm->ijkm", m.ginv, dlow)
    return (
        dgam.transpose(0, 2, 3, 1)  # d_c Gamma^a_{db} at [a, b, c, d]
        - dgam.transpose(0, 2, 1, 3)  # d_d Gamma^a_{cb}
        + np.einsum("ace,edb->abcd", gam, gam)
        - np.einsum("ade,ecb->abcd", gam, gam)
    )


def weyl_lower(riem_low: np.ndarray, ricci: np.ndarray, scalar: float, g: np.ndarray) -> np.ndarray:
    """Trace-free part of ``R_abcd`` in dimension 4."""
    gr = np.einsum("ac,bd->abcd", g, ricci)
    kulkarni = gr - gr.transpose(0, 1, 3, 2) - gr.transpose(1, 0, 2, 3) + gr.transpose(1, 0, 3, 2)
    gg = np.einsum("ac,bd->abcd", g, g)
    return riem_low - 0.5 * kulkarni + (scalar / 6.0) * (gg - gg.transpose(0, 1, 3, 2))


def orthonormal_frame(g: np.ndarray) -> np.ndarray:
    """Columns are an orthonormal, positively oriented frame ``e_A``."""
    try:
        chol = np.linalg.cholesky(g)
    except np.linalg.LinAlgError as exc:
        raise SingularMetric("metric is not positive definite") from exc
    return np.linalg.inv(chol).T


def weyl_operator(weyl_low: np.ndarray, g: np.ndarray) -> np.ndarray:
    """6x6 matrix of the Weyl tensor acting on orthonormal 2-forms."""
    e = orthonormal_frame(g)
    cf = np.einsum("ijkl,iA,jB,kC,lD->ABCD", weyl_low, e, e, e, e)
    w = np.empty((6, 6))
    for a, (i, j) in enumerate(_PAIRS):
        for b, (k, l) in enumerate(_PAIRS):
            w[a, b] = cf[i, j, k, l]
    return 0.5 * (w + w.T)


def split_norms(w6: np.ndarray, orientation: int = 1) -> tuple[float, float]:
    """Tensor norms of the self-dual and anti-self-dual Weyl parts."""
    star = int(orientation) * _STAR
    plus = 0.5 * (np.eye(6) + star)
    minus = 0.5 * (np.eye(6) - star)
    # the tensor norm counts each antisymmetric index pair twice
    return (
        2.0 * float(np.linalg.norm(plus @ w6 @ plus)),
        2.0 * float(np.linalg.norm(minus @ w6 @ minus)),
    )


@dataclass(frozen=True)
class CurvatureBundle:
    christoffel: np.ndarray
    riemann: np.ndarray
    ricci: np.ndarray
    scalar: float
    weyl: np.ndarray
    w_plus_norm: float
    w_minus_norm: float
    weyl_norm: float
    ricci_norm: float
    metric: np.ndarray

    @property
    def riemann_lower(self) -> np.ndarray:
        return np.einsum("ae,ebcd->abcd", self.metric, self.riemann)

    @property
    def weyl_mixed(self) -> np.ndarray:
        """Weyl tensor with the first index raised, a conformal invariant."""
        return np.einsum("ae,ebcd->abcd", np.linalg.inv(self.metric), self.weyl)


def curvature(metric_field: Callable, p: ChartPoint, orientation: int = Orientation.POSITIVE) -> CurvatureBundle:
    """Full curvature of ``metric_field`` at ``p``."""
    m = metric_jets(metric_field, p)
    gam = _christoffel(m)
    riem = _riemann(m, gam)
    ricci = np.einsum("abad->bd", riem)
    ricci = 0.5 * (ricci + ricci.T)
    scalar = float(np.einsum("bd,bd->", m.ginv, ricci))
    riem_low = np.einsum("ae,ebcd->abcd", m.g, riem)
    weyl = weyl_lower(riem_low, ricci, scalar, m.g)
    w6 = weyl_operator(weyl, m.g)
    w_plus, w_minus = split_norms(w6, orientation)
    e = orthonormal_frame(m.g)
    ric_frame = e.T @ ricci @ e
    return CurvatureBundle(
        christoffel=gam,
        riemann=riem,
        ricci=ricci,
        scalar=scalar,
        weyl=weyl,
        w_plus_norm=w_plus,
        w_minus_norm=w_minus,
        weyl_norm=2.0 * float(np.linalg.norm(w6)),
        ricci_norm=float(np.linalg.norm(ric_frame)),
        metric=m.g,
    )


class AsdRatio(NamedTuple):
    """Fractions of the Weyl norm in the self-dual and anti-self-dual parts.

    Ratios are NaN when the Weyl tensor is negligible (conformally flat point).
    """

    ratio_plus: float
    ratio_minus: float
    weyl_norm: float

    @property
    def negligible(self) -> bool:
        return math.isnan(self.ratio_plus)

    @property
    def best(self) -> float:
        return min(self.ratio_plus, self.ratio_minus)


def asd_ratio(metric_field: Callable, p: ChartPoint, threshold: float = NEGLIGIBLE_WEYL) -> AsdRatio:
    """``(|W+|/|W|, |W-|/|W|)`` with respect to the chart orientation.

    The opposite orientation swaps the two entries, so the smaller one decides
    (anti-)self-duality whatever the orientation convention.
    """
    b = curvature(metric_field, p)
    norm = b.weyl_norm
    if norm < threshold:
        return AsdRatio(math.nan, math.nan, norm)
    return AsdRatio(b.w_plus_norm / norm, b.w_minus_norm / norm, norm)
