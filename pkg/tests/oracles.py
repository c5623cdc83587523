"""Independent reference implementations for the test suite.

Everything here is written from the closed forms directly in mpmath at high
precision, with no stability rewrites and no code shared with ``sdmet``.
Derivatives come from central finite differences at 50 digits, which is far
more accurate than the double-precision results being checked.
"""

from __future__ import annotations

import itertools

import mpmath as mp
import numpy as np

mp.mp.dps = 50

_H = mp.mpf("1e-15")


def green(c, r, z):
    c, r, z = mp.mpf(c), mp.mpf(r), mp.mpf(z)
    s = r**2 + z**2 + c**2
    return -mp.mpf(1) / 2 + (1 - 4 * c**2 * z**2 / s**2) ** mp.mpf(-0.5) / 2


def flux_fc(c, r, z):
    """Single-monopole flux function, literal closed form."""
    c, r, z = mp.mpf(c), mp.mpf(r), mp.mpf(z)
    return (r**2 + z**2 - c**2) / (2 * mp.sqrt((c**2 + r**2 + z**2) ** 2 - 4 * c**2 * z**2)) - mp.mpf(1) / 2


def V_cyl(heights, r, z):
    return 1 + sum((green(c, r, z) for c in heights), mp.mpf(0))


def _halfplane(heights, x1, x2):
    x1, x2 = mp.mpf(x1), mp.mpf(x2)
    big_r = mp.sqrt(x1**2 + x2**2)
    qs = [-mp.mpf(c) ** 2 for c in heights]
    rs = [mp.sqrt((x1 - q) ** 2 + x2**2) for q in qs]
    return big_r, qs, rs


def V_half(heights, x1, x2):
    big_r, qs, rs = _halfplane(heights, x1, x2)
    n = len(heights)
    return 1 - mp.mpf(n) / 2 + sum(((big_r - q) / (2 * ra) for q, ra in zip(qs, rs)), mp.mpf(0))


def f_half(heights, x1, x2):
    big_r, qs, rs = _halfplane(heights, x1, x2)
    n = len(heights)
    return -mp.mpf(n) / 2 + sum(((big_r + q) / (2 * ra) for q, ra in zip(qs, rs)), mp.mpf(0))


def f_cyl(heights, r, z):
    """Flux function through the coordinate change (exact in mpmath)."""
    r, z = mp.mpf(r), mp.mpf(z)
    return f_half(heights, r**2 - z**2, 2 * r * z)


def g_lb(heights, r, z):
    """LeBrun metric in (r, tau, z, theta): z^2 (V g_H3 + (dtheta + f dtau)^2 / V)."""
    v = V_cyl(heights, r, z)
    f = f_cyl(heights, r, z)
    r, z = mp.mpf(r), mp.mpf(z)
    g = mp.zeros(4, 4)
    g[0, 0] = v
    g[2, 2] = v
    g[1, 1] = v * r**2 + z**2 * f**2 / v
    g[3, 3] = z**2 / v
    g[1, 3] = g[3, 1] = z**2 * f / v
    return g


def g_tilde(heights, x1, x2):
    """Bracketed half-plane metric in (x1, x2, theta, tau)."""
    v = V_half(heights, x1, x2)
    f = f_half(heights, x1, x2)
    x1, x2 = mp.mpf(x1), mp.mpf(x2)
    big_r = mp.sqrt(x1**2 + x2**2)
    k = 2 * big_r**2 / x2**2
    g = mp.zeros(4, 4)
    g[0, 0] = g[1, 1] = 1 / x2**2
    # k (1 + x1/R) dtau^2 + k (1 - x1/R) (dtheta + f dtau)^2 / V^2
    w = k * (1 - x1 / big_r) / v**2
    g[2, 2] = w
    g[2, 3] = g[3, 2] = w * f
    g[3, 3] = k * (1 + x1 / big_r) + w * f**2
    return g


def u_vec(q, x1, x2):
    x1, x2 = mp.mpf(x1), mp.mpf(x2)
    if q == "inf":
        return (mp.mpf(0), mp.mpf(-1))
    if q == "0":
        big_r = mp.sqrt(x1**2 + x2**2)
        return (x2 / big_r, x1 / big_r)
    rho = mp.sqrt((x1 - q) ** 2 + x2**2)
    return (x2 / rho, (x1 - q) / rho)


def phi(pairs, qs, x1, x2):
    """phi = sum (u_a - u_{a+1})/2 (x) (m_a, n_a) + (u_k + u_1)/2 (x) (m_k, n_k).

    ``qs`` holds the boundary points with "inf" and "0" as strings.
    Returns ``(a1, a2, b1, b2)``.
    """
    us = [u_vec(q, x1, x2) for q in qs]
    k = len(pairs)
    a = [mp.mpf(0), mp.mpf(0)]
    b = [mp.mpf(0), mp.mpf(0)]
    for al in range(k):
        nxt, sign = (al + 1, -1) if al < k - 1 else (0, 1)
        m, n = pairs[al]
        for i in range(2):
            w = (us[al][i] + sign * us[nxt][i]) / 2
            a[i] += m * w
            b[i] += n * w
    return a[0], a[1], b[0], b[1]


def semifree_pairs(n):
    k = n + 2
    return [(0, 1)] + [(1, k - al) for al in range(2, k + 1)]


def g_joyce(pairs, qs, x1, x2):
    a1, a2, b1, b2 = phi(pairs, qs, x1, x2)
    det = a1 * b2 - a2 * b1
    x2 = mp.mpf(x2)
    g = mp.zeros(4, 4)
    g[0, 0] = g[1, 1] = 1 / x2**2
    g[2, 2] = (a1**2 + a2**2) / det**2
    g[3, 3] = (b1**2 + b2**2) / det**2
    g[2, 3] = g[3, 2] = -(a1 * b1 + a2 * b2) / det**2
    return g


def g_joyce_semifree(heights, x1, x2):
    qs = ["inf", "0"] + [-mp.mpf(c) ** 2 for c in heights]
    return g_joyce(semifree_pairs(len(heights)), qs, x1, x2)


# ---------------------------------------------------------------- derivatives


def derivs(fn, point, h=_H):
    """Value, gradient and Hessian of a scalar or matrix valued ``fn`` by central differences."""
    x = [mp.mpf(v) for v in point]
    dim = len(x)

    def at(*shifts):
        y = list(x)
        for i, s in shifts:
            y[i] += s * h
        return fn(*y)

    f0 = fn(*x)
    grad = [(at((i, 1)) - at((i, -1))) / (2 * h) for i in range(dim)]
    hess = [[None] * dim for _ in range(dim)]
    for i in range(dim):
        hess[i][i] = (at((i, 1)) - 2 * f0 + at((i, -1))) / h**2
        for j in range(i + 1, dim):
            hess[i][j] = hess[j][i] = (
                at((i, 1), (j, 1)) - at((i, 1), (j, -1)) - at((i, -1), (j, 1)) + at((i, -1), (j, -1))
            ) / (4 * h**2)
    return f0, grad, hess


def laplacian_h3(fn, r, z):
    """Hyperbolic Laplacian of an axially symmetric ``fn(r, z)`` in cylindrical coordinates."""
    u, g, h = derivs(fn, (r, z))
    r, z = mp.mpf(r), mp.mpf(z)
    return z**2 * (h[0][0] + g[0] / r + h[1][1]) - z * g[1]


# ---------------------------------------------------------------- curvature


class Curv:
    """Lower-index Riemann tensor from the second-derivative formula.

    R_abcd = (g_ad,bc + g_bc,ad - g_ac,bd - g_bd,ac) / 2
             + g_ef (G^e_bc G^f_ad - G^e_bd G^f_ac)
    """

    def __init__(self, metric, point):
        g, dg, ddg = derivs(metric, point)
        n = 4
        gi = g**-1
        # first-kind symbols [c, ab] = (g_ca,b + g_cb,a - g_ab,c)/2
        first = [[[(dg[b][c, a] + dg[a][c, b] - dg[c][a, b]) / 2 for b in range(n)] for a in range(n)] for c in range(n)]
        gam = [[[sum(gi[e, c] * first[c][a][b] for c in range(n)) for b in range(n)] for a in range(n)] for e in range(n)]
        riem = np.empty((n, n, n, n), dtype=object)
        for a, b, c, d in itertools.product(range(n), repeat=4):
            val = (ddg[b][c][a, d] + ddg[a][d][b, c] - ddg[a][c][b, d] - ddg[b][d][a, c]) / 2
            for e in range(n):
                for f in range(n):
                    val += g[e, f] * (gam[e][b][c] * gam[f][a][d] - gam[e][b][d] * gam[f][a][c])
            riem[a, b, c, d] = val
        self.g = g
        self.gi = gi
        self.riem = riem
        ric = mp.zeros(n, n)
        for b, d in itertools.product(range(n), repeat=2):
            ric[b, d] = sum(gi[a, c] * riem[a, b, c, d] for a in range(n) for c in range(n))
        self.ricci = ric
        self.scalar = sum(gi[b, d] * ric[b, d] for b in range(n) for d in range(n))
        weyl = np.empty_like(riem)
        s = self.scalar
        for a, b, c, d in itertools.product(range(n), repeat=4):
            kn = g[a, c] * ric[b, d] - g[a, d] * ric[b, c] - g[b, c] * ric[a, d] + g[b, d] * ric[a, c]
            gg = g[a, c] * g[b, d] - g[a, d] * g[b, c]
            weyl[a, b, c, d] = riem[a, b, c, d] - kn / 2 + s * gg / 6
        self.weyl = weyl

    def _raise_all(self, t):
        gi = np.array(self.gi.tolist(), dtype=object)
        return np.einsum("ai,bj,ck,dl,ijkl->abcd", gi, gi, gi, gi, t)

    def weyl_norm(self):
        return mp.sqrt(np.sum(self.weyl * self._raise_all(self.weyl)))

    def weyl_split(self):
        """(|W+|, |W-|) from W.*W with the chart volume form."""
        eps = np.zeros((4, 4, 4, 4), dtype=object)
        vol = mp.sqrt(mp.det(self.g))
        for perm in itertools.permutations(range(4)):
            sign = np.linalg.det(np.eye(4)[list(perm)])
            eps[perm] = int(round(sign)) * vol
        wu = self._raise_all(self.weyl)
        # <W, *W> = (1/2) eps_abef W^ef_cd W^abcd, with W^ef_cd = W^efcd lowered on cd
        gl = np.array(self.g.tolist(), dtype=object)
        w_up2 = np.einsum("efkl,kc,ld->efcd", wu, gl, gl)
        star = np.einsum("abef,efcd->abcd", eps, w_up2) / 2
        cross = np.sum(star * wu)
        total = np.sum(self.weyl * wu)
        plus = mp.sqrt(max((total + cross) / 2, 0))
        minus = mp.sqrt(max((total - cross) / 2, 0))
        return plus, minus


def to_float(x) -> float:
    return float(mp.mpf(x))
