"""Paley-type inequality on the fan for weights of weak type L^1.

For phi with s |{phi > s}| <= C and 1 < p <= 2,

    (int |f~|^p phi^{2-p} dnu_2 dw)^{1/p} <= C_p ||f||_p.

The weak-type part of the argument rests on the layer-cake bound
int_{phi <= sigma} phi^2 <= 2 C sigma, which is checked here directly.
"""
import math

import numpy as np
from scipy import integrate

from .conditions import supremum_with_trend
from .geometry import integrate_hn_radial, sphere_area
from .rearrange import INF, Urho, binom_sq_sum_direct
from .report import VerificationReport
from .transform import SpectralTable, fan_power_integral, graded_table


class PowerDecay(Urho):
    """phi(a, w) = (|a| + |w|)^{-rho} with |a| = (2k+n+1)|lambda|."""

    def __init__(self, rho, n=1, scale=1.0):
        super().__init__(rho, n, mode="exact", scale=scale)
        self.label = f"PowerDecay({self.rho:g})"

    @property
    def weak_l1(self):
        # s d(s) = K s^{1 - (4n+1)/rho}: bounded in s only at rho = 4n+1
        return abs(self.rho - (4 * self.n + 1)) <= 1e-12 * self.rho

    def scaled(self, c):
        return PowerDecay(self.rho, self.n, self.scale * c)


class ZeroWeight:
    n = 1
    weak_l1 = True
    scale = 0.0

    def value(self, k, lam, w):
        return np.zeros(np.broadcast(np.asarray(lam), np.asarray(w)).shape)

    def distribution(self, M):
        return np.zeros_like(np.asarray(M, dtype=float))

    def scaled(self, c):
        return self


def level_grid(lo=1e-3, decades=6, per_decade=20):
    return np.geomspace(lo, lo * 10 ** decades, decades * per_decade + 1)


def weak_l1_quasinorm(phi, levels=None):
    """sup over levels of s |{phi > s}|, or inf if the product grows off the grid."""
    s = level_grid() if levels is None else np.asarray(levels, dtype=float)
    d = np.asarray(phi.distribution(s), dtype=float) * np.ones_like(s)
    if not np.any(d > 0):
        return 0.0
    res = supremum_with_trend(s, s * d)
    return res.supremum


def _region_integral(n, rho, u0, power):
    """int int A^{2n} r^{2n-1} (A + r)^{-power} over A, r > 0 with A + r >= u0, by dblquad."""
    g = lambda r, A: A ** (2 * n) * r ** (2 * n - 1) * (A + r) ** (-power)
    # split at A = u0 so the lower r limit is piecewise smooth
    inner_lo = lambda A: u0 - A
    a, _ = integrate.dblquad(g, 0, u0, inner_lo, np.inf, epsabs=0, epsrel=1e-10)
    b, _ = integrate.dblquad(g, u0, np.inf, 0, np.inf, epsabs=0, epsrel=1e-10)
    return a + b


def below_level_phi2(phi, sigma, terms=200000):
    """int_{phi <= sigma} phi^2 dnu_2 dw by quadrature.

    The ray k contributes binom^2 c_k^{-(2n+1)} times a k-independent
    integral over (A, |w|), A = c_k |lambda|, c_k = 2k+n+1; the k-sum is
    summed directly.
    """
    n, rho, sc = phi.n, phi.rho, phi.scale
    if sigma <= 0 or sc == 0:
        return 0.0
    u0 = (sigma / sc) ** (-1.0 / rho)
    I = _region_integral(n, rho, u0, 2 * rho)
    S = binom_sq_sum_direct(n, 2 * n + 1, shift=1, terms=terms)
    return (2 * math.pi) ** (-2 * n - 1) * 2.0 * sphere_area(n) * sc ** 2 * S * I


def layer_cake_rhs(phi, sigma):
    """int_0^sigma 2t (d(t) - d(sigma)) dt from the distribution function."""
    ds = float(phi.distribution(sigma))
    g = lambda t: 2 * t * (float(phi.distribution(t)) - ds)
    v, _ = integrate.quad(g, 0, sigma, epsabs=0, epsrel=1e-11, limit=200)
    return v


def layer_cake_bound_check(phi, sigma_grid=None, tol=0.05):
    """max over sigma of int_{phi<=sigma} phi^2 / sigma, against 2C."""
    if not phi.weak_l1:
        raise ValueError("layer-cake bound needs a weak-L^1 weight")
    sig = level_grid() if sigma_grid is None else np.asarray(sigma_grid, dtype=float)
    C = weak_l1_quasinorm(phi)
    direct = np.array([below_level_phi2(phi, s) for s in sig])
    ratio = direct / sig
    worst = float(ratio.max()) if ratio.size else 0.0
    meta = dict(weak_l1_constant=C, sigma=sig, ratio=ratio)
    return VerificationReport("layer_cake", worst, 2 * C, 2 * C, 2 * C * (1 + tol) - worst,
                              worst <= 2 * C * (1 + tol), meta)


def layer_cake_identity_check(phi, sigma):
    """Relative difference between direct quadrature and the layer-cake formula."""
    a = below_level_phi2(phi, sigma)
    b = layer_cake_rhs(phi, sigma)
    return abs(a - b) / abs(b) if b else abs(a)


def paley_table(f, refine=1):
    """phi^{2-p} leaves an integrable singularity at lambda = 0; use the graded rule."""
    return graded_table(f, refine)


def paley_ratio(f, phi, p, table=None, refine=1):
    """(int |f~|^p phi^{2-p} dnu_2 dw)^{1/p} / ||f||_p."""
    if not 1 < p <= 2:
        raise ValueError("Paley inequality needs 1 < p <= 2")
    if p == 2:
        # phi^0 = 1: the plain Plancherel table is the right rule
        table = SpectralTable.build(f, refine=refine)
        lhs = fan_power_integral(table, 2.0)
    else:
        table = table if table is not None else paley_table(f, refine)
        e = 2.0 - p
        lhs = fan_power_integral(table, p, lambda k, lam, w: np.asarray(phi.value(k, lam, w)) ** e)
    lhs = lhs ** (1 / p)
    rhs = integrate_hn_radial(lambda r, t: np.abs(f.profile(r, t)) ** p, f.n, table.grid) ** (1 / p)
    return lhs / rhs if rhs > 0 else 0.0


def paley_check(f, phi, p, refine=(1, 2), rel_tol=0.10):
    """Paley ratio on two grids; finite and stable to rel_tol."""
    if not phi.weak_l1:
        raise ValueError("Paley check needs a weak-L^1 weight")
    ratios = [paley_ratio(f, phi, p, refine=r) for r in refine]
    spread = abs(ratios[-1] - ratios[0]) / abs(ratios[-1]) if ratios[-1] else 0.0
    ok = all(np.isfinite(ratios)) and spread <= rel_tol
    return VerificationReport("paley", ratios[-1], float("nan"), float("nan"), rel_tol - spread, ok,
                              dict(p=p, ratios=ratios, spread=spread, weight=phi.label))
