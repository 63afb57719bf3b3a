"""Heisenberg group structure and quadrature on H^n and on the fan.

Radial integrals on H^n use composite Gauss-Legendre panels in |z| and t,
geometrically graded toward 0 so that weights like |z|^{-2s} and N^{-2s}
integrate to full accuracy. Fan integrals use a symmetric Gauss-Legendre
rule in lambda and, for the w variable, the rescaled radius
x = |lambda| |w|^2 / 2, in which the Laguerre functions do not depend on lambda.
"""
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .specfn import log_cnk


def Q(n):
    """Homogeneous dimension 2n + 2."""
    return 2 * n + 2


def sphere_area(n):
    """Surface area of the unit sphere in C^n = R^{2n}: 2 pi^n / Gamma(n)."""
    return 2.0 * math.pi ** n / math.gamma(n)


# ------------------------------------------------------------------ group


@dataclass(frozen=True)
class HPoint:
    z: tuple
    t: float

    def __post_init__(self):
        z = tuple(complex(c) for c in np.atleast_1d(self.z))
        object.__setattr__(self, "z", z)
        if not (all(np.isfinite([c.real for c in z] + [c.imag for c in z])) and math.isfinite(self.t)):
            raise ValueError("HPoint coordinates must be finite")

    @property
    def n(self):
        return len(self.z)

    @property
    def zabs(self):
        return math.sqrt(sum(abs(c) ** 2 for c in self.z))

    @classmethod
    def identity(cls, n):
        return cls((0j,) * n, 0.0)

    def inverse(self):
        return HPoint(tuple(-c for c in self.z), -self.t)


def group_mul(p, q):
    """(z, t)(w, s) = (z + w, t + s + Im(z . conj(w))/2)."""
    if p.n != q.n:
        raise ValueError(f"dimension mismatch: {p.n} vs {q.n}")
    z = np.array(p.z)
    w = np.array(q.z)
    return HPoint(tuple(z + w), p.t + q.t + 0.5 * float(np.sum(z * np.conj(w)).imag))


def homogeneous_norm(p):
    """N(z, t) = (|z|^4 + 16 t^2)^{1/4}."""
    return (p.zabs ** 4 + 16.0 * p.t ** 2) ** 0.25


def homnorm_rt(r, t):
    return (np.asarray(r, dtype=float) ** 4 + 16.0 * np.asarray(t, dtype=float) ** 2) ** 0.25


def dilate_point(r, p):
    return HPoint(tuple(r * c for c in p.z), r * r * p.t)


def dilate(r, f):
    """delta_r f(z, t) = f(rz, r^2 t) for a RadialFunction."""
    if not r > 0:
        raise ValueError("dilation factor must be positive")
    return f.dilate(r)


# -------------------------------------------------------------------- fan


@dataclass(frozen=True)
class FanPoint:
    n: int
    k: int
    lam: float

    def __post_init__(self):
        if self.lam == 0:
            raise ValueError("fan points need lambda != 0; use the limiting ray")
        if self.k < 0 or self.n < 1:
            raise ValueError("need k >= 0 and n >= 1")

    @property
    def ev(self):
        return (2 * self.k + self.n) * abs(self.lam)

    @property
    def abs_a(self):
        return (2 * self.k + self.n + 1) * abs(self.lam)


# ------------------------------------------------------------- quadrature


def gauss_panels(breaks, nodes_per_panel=16):
    """Composite Gauss-Legendre rule on consecutive breakpoints."""
    breaks = np.asarray(breaks, dtype=float)
    g, w = np.polynomial.legendre.leggauss(nodes_per_panel)
    a = breaks[:-1, None]
    b = breaks[1:, None]
    x = (0.5 * (b - a) * g + 0.5 * (a + b)).ravel()
    wx = (0.5 * (b - a) * w).ravel()
    return x, wx


def graded_breaks(upper, panels, levels=12, ratio=0.2, lower=0.0):
    """Breakpoints on [lower, upper]: geometric toward `lower`, then uniform."""
    span = upper - lower
    first = span * ratio
    geo = lower + first * ratio ** np.arange(levels, 0, -1)
    uni = np.linspace(lower + first, upper, panels + 1)
    return np.concatenate([[lower], geo, uni])


def symmetric_breaks(upper, panels, levels=12, ratio=0.2):
    pos = graded_breaks(upper, panels, levels, ratio)
    return np.concatenate([-pos[:0:-1], pos])


@dataclass(frozen=True)
class QuadratureGrid:
    r_nodes: np.ndarray
    r_weights: np.ndarray
    t_nodes: np.ndarray
    t_weights: np.ndarray
    lambda_nodes: np.ndarray
    lambda_weights: np.ndarray
    k_max: int
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for name in ("r", "t", "lambda"):
            x = getattr(self, name + "_nodes")
            w = getattr(self, name + "_weights")
            if x.shape != w.shape:
                raise ValueError(f"{name} nodes/weights shape mismatch")
            if np.any(w <= 0):
                raise ValueError(f"{name} weights must be positive")
            if np.any(np.diff(x) <= 0):
                raise ValueError(f"{name} nodes must be strictly increasing")
        if self.k_max < 0:
            raise ValueError("k_max must be >= 0")

    @classmethod
    def build(cls, r_max, t_max, lam_max, r_panels=24, t_panels=24, n_lambda=64,
              k_max=256, nodes=16, levels=12):
        if n_lambda % 2:
            n_lambda += 1  # keep lambda = 0 off the grid
        r, wr = gauss_panels(graded_breaks(r_max, r_panels, levels), nodes)
        t, wt = gauss_panels(symmetric_breaks(t_max, t_panels, levels), nodes)
        g, wg = np.polynomial.legendre.leggauss(n_lambda)
        meta = dict(r_max=r_max, t_max=t_max, lam_max=lam_max, r_panels=r_panels,
                    t_panels=t_panels, n_lambda=n_lambda, nodes=nodes, levels=levels)
        return cls(r, wr, t, wt, lam_max * g, lam_max * wg, int(k_max), meta)

    def refined(self, factor=2):
        m = self.meta
        return QuadratureGrid.build(m["r_max"], m["t_max"], m["lam_max"], m["r_panels"] * factor,
                                    m["t_panels"] * factor, m["n_lambda"] * factor,
                                    self.k_max, m["nodes"], m["levels"])


def integrate_hn_radial(F, n, grid):
    """int_{H^n} F dz dt for F depending on (|z|, t).

    F is a callable F(r, t) broadcasting over arrays, or any object with a
    `profile` method of that signature.
    """
    fn = getattr(F, "profile", F)
    r = grid.r_nodes[:, None]
    t = grid.t_nodes[None, :]
    vals = np.asarray(fn(r, t), dtype=float) * np.ones((r.size, t.size))
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("non-finite integrand sample")
    wr = grid.r_weights * sphere_area(n) * grid.r_nodes ** (2 * n - 1)
    return float(wr @ vals @ grid.t_weights)


def fan_x_max(kmax, n):
    xt = 4 * kmax + 2 * n + 2
    return xt + 20.0 * xt ** (1.0 / 3.0) + 40.0


class FanQuadrature:
    """w-quadrature on the fan in x = |lambda| |w|^2 / 2.

    One table psi_k(x) = L^{n-1}_k(x) exp(-x/2), k <= kmax, serves every lambda.
    Nodes are composite Gauss-Legendre in v = sqrt(x); the ray k only uses
    nodes with x below its own decay point.
    """

    def __init__(self, n, lam_nodes, lam_weights, kmax, width=1.5, panel_nodes=8):
        self.n = int(n)
        self.lam = np.asarray(lam_nodes, dtype=float)
        self.wlam = np.asarray(lam_weights, dtype=float)
        if np.any(self.lam == 0):
            raise ValueError("lambda = 0 is not on the fan")
        self.kmax = int(kmax)
        vmax = math.sqrt(fan_x_max(self.kmax, self.n))
        h = min(0.5, width / math.sqrt(self.kmax + self.n))
        panels = int(math.ceil(vmax / h))
        v, wv = gauss_panels(np.linspace(0.0, vmax, panels + 1), panel_nodes)
        self.x = v * v
        self.wx = 2.0 * v * wv
        ks = np.arange(self.kmax + 1)
        self.kcut = np.searchsorted(self.x, [fan_x_max(k, self.n) for k in ks])
        self.table = kernels.laguerre_table(self.x, self.n - 1, self.kmax)
        # measure pieces: (2pi)^{-2n-1} binom^2 |lam|^{2n} dlam times the radial
        # w-measure (pi^n/Gamma(n)) (2/|lam|)^n x^{n-1} dx
        mu = np.abs(self.lam)
        self.lam_factor = (2 * math.pi) ** (-2 * self.n - 1) * self.wlam * mu ** (2 * self.n) \
            * math.pi ** self.n / math.gamma(self.n) * (2.0 / mu) ** self.n
        self.log_binom = -np.asarray(log_cnk(self.n, ks))
        self.x_weight = self.x ** (self.n - 1) * self.wx

    def w_radius(self, lam, x):
        return np.sqrt(2.0 * x / np.abs(lam))

    def integrate(self, phi, active=None, ks=None):
        """(2pi)^{-2n-1} sum_k binom^2 int int phi |lambda|^{2n} dw dlambda.

        phi(ray) gets a FanRay with k, idx (lambda indices), lam of shape
        (m, 1), w of shape (m, j), x of shape (1, j) and psi =
        phi^{n-1}_{k,lam}(w) of shape (1, j); it returns values of shape (m, j).
        `active` is an optional (kmax+1, n_lambda) mask of rays to keep.
        """
        total = 0.0
        ks = range(self.kmax + 1) if ks is None else ks
        for k in ks:
            cols = np.arange(self.lam.size) if active is None else np.nonzero(active[k])[0]
            if cols.size == 0:
                continue
            j = self.kcut[k]
            lam = self.lam[cols][:, None]
            x = self.x[None, :j]
            ray = FanRay(k, cols, lam, self.w_radius(lam, x), x, self.table[k, None, :j])
            vals = np.asarray(phi(ray), dtype=float)
            if not np.all(np.isfinite(vals)):
                raise FloatingPointError(f"non-finite fan integrand on ray k={k}")
            inner = vals @ self.x_weight[:j]
            total += math.exp(2 * self.log_binom[k]) * float(self.lam_factor[cols] @ inner)
        return total


@dataclass
class FanRay:
    k: int
    idx: np.ndarray
    lam: np.ndarray
    w: np.ndarray
    x: np.ndarray
    psi: np.ndarray


def integrate_fan(phi, n, grid, tail_check=None):
    """Fan integral of phi(ray) (see FanQuadrature.integrate) on the grid's lambda rule and k <= k_max.

    `tail_check`, if given, is the relative size of the last ray's
    contribution; a warning is raised above 1e-6.
    """
    fq = FanQuadrature(n, grid.lambda_nodes, grid.lambda_weights, grid.k_max)
    total = fq.integrate(phi)
    if tail_check is not None and tail_check > 1e-6:
        warnings.warn(f"fan truncation tail estimate {tail_check:.2e} exceeds 1e-6", RuntimeWarning)
    return total
