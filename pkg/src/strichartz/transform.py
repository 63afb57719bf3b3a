"""Strichartz Fourier transform of radial functions via Laguerre coefficients.

For radial f the transform on the ray k is a multiple of the Laguerre
function:

    f^(a, w) = R_k(lam) phi_{k,lam}(w),    f~(a, w) = c_{n,k} R_k(lam) phi_{k,lam}(w),
    R_k(lam) = c_{n,k} int f^{-lam}(z) phi_{k,lam}(z) dz,

with f^{lam}(z) = int f(z, t) e^{i lam t} dt. Twisting a radial function with
phi_k returns R_k phi_k, so c_{n,k} enters R_k once and f~ once more; that
normalization satisfies Plancherel with no extra factor.
"""
import json
import math
import warnings

import numpy as np

from . import kernels
from .functions import Gaussian
from .geometry import FanQuadrature, QuadratureGrid, gauss_panels, integrate_hn_radial, sphere_area
from .report import VerificationReport
from .specfn import bessel_ratio, cnk, laguerre_fn, log_cnk

SCHEMA = 1


def _subdivide(breaks, min_panels):
    breaks = np.asarray(breaks, dtype=float)
    m = max(1, int(math.ceil(min_panels / (breaks.size - 1))))
    pieces = [np.linspace(a, b, m + 1)[:-1] for a, b in zip(breaks[:-1], breaks[1:])]
    return np.concatenate(pieces + [breaks[-1:]])


def spectral_grid(f, k_max=256, n_lambda=64, refine=1, nodes=16, lam_max=None):
    """Quadrature grid resolving f and the Laguerre functions up to k_max."""
    lam_max = f.lam_extent if lam_max is None else lam_max
    rb = f.r_breaks()
    tb = f.t_breaks()
    # phase of psi_k(|lam| r^2/2) runs at about sqrt(2 k |lam|) per unit r
    osc_r = math.sqrt(2.0 * max(k_max, 1) * lam_max) * rb[-1] / (2 * math.pi)
    osc_t = lam_max * (tb[-1] - tb[0]) / (2 * math.pi)
    rb = _subdivide(rb, refine * max(24, int(osc_r / 2.5) + 8))
    tb = _subdivide(tb, refine * max(24, int(osc_t / 2.5) + 8))
    n_lambda = refine * n_lambda
    n_lambda += n_lambda % 2
    r, wr = gauss_panels(rb, nodes)
    t, wt = gauss_panels(tb, nodes)
    g, wg = np.polynomial.legendre.leggauss(n_lambda)
    meta = dict(r_max=float(rb[-1]), t_span=[float(tb[0]), float(tb[-1])], lam_max=float(lam_max),
                n_r=int(r.size), n_t=int(t.size), n_lambda=int(n_lambda), refine=refine)
    return QuadratureGrid(r, wr, t, wt, lam_max * g, lam_max * wg, int(k_max), meta)


def graded_lambda_rule(lam_max, levels=12, panels=4, nodes=16, ratio=0.5):
    """Symmetric composite Gauss-Legendre rule on [-lam_max, lam_max], graded toward 0.

    For integrands with an integrable singularity at lambda = 0.
    """
    pos = lam_max * np.concatenate([[0.0], ratio ** np.arange(levels, 0, -1),
                                    np.linspace(1.0, float(panels), panels) / panels])
    pos = np.unique(pos)
    x, w = gauss_panels(pos, nodes)
    return np.concatenate([-x[::-1], x]), np.concatenate([w[::-1], w])


def graded_table(f, refine=1):
    """SpectralTable on a lambda rule graded toward 0, with k_max = 256 * refine.

    For fan integrals against weights singular where a and w vanish together.
    """
    lam, w = graded_lambda_rule(f.lam_extent, levels=4 * refine)
    return SpectralTable.build(f, lam_nodes=lam, lam_weights=w, k_max=256 * refine, adaptive=False)


def _central_parts(f, mu, grid):
    # cos and sin parts of f^{mu}(r) on the grid's r nodes
    fl = f.central_fourier(mu, grid.r_nodes, grid.t_nodes, grid.t_weights)
    return fl.real, fl.imag


class SpectralTable:
    """Laguerre coefficients R_k(lam) of a radial f on a (k, lam) lattice."""

    def __init__(self, n, lam, wlam, R, meta=None):
        self.n = int(n)
        self.lam = np.asarray(lam, dtype=float)
        self.wlam = None if wlam is None else np.asarray(wlam, dtype=float)
        self.R = np.asarray(R, dtype=complex)
        self.k_max = self.R.shape[0] - 1
        self.log_c = np.asarray(log_cnk(self.n, np.arange(self.k_max + 1)))
        self.meta = dict(meta or {})

    @property
    def c(self):
        return np.exp(self.log_c)

    @property
    def normalized(self):
        """c_{n,k} R_k: the coefficient of phi_{k,lam} in f~."""
        return self.c[:, None] * self.R

    @classmethod
    def build(cls, f, grid=None, lam_nodes=None, k_max=256, adaptive=True, tol=1e-13, cap=8192,
              n_lambda=64, refine=1, lam_weights=None):
        """Coefficients for every lambda node and k <= k_max.

        With `adaptive`, k_max doubles until the estimated tail of
        sum_k |R_k|^2 / c_{n,k} (weighted by the lambda rule) is below `tol`.
        """
        K = int(k_max)
        while True:
            g = grid if grid is not None else spectral_grid(f, K, n_lambda, refine)
            lam = g.lambda_nodes if lam_nodes is None else np.asarray(lam_nodes, dtype=float)
            wl = g.lambda_weights if lam_nodes is None else lam_weights
            R = _coefficients(f, lam, g, K)
            tab = cls(f.n, lam, wl, R, dict(grid=g.meta, function=repr(f)))
            tail = tab.tail_estimate()
            tab.meta["tail"] = tail
            if not adaptive or tail <= tol or 2 * K > cap:
                if adaptive and tail > tol:
                    warnings.warn(f"k truncation tail {tail:.1e} above {tol:.0e} at cap {cap}", RuntimeWarning)
                tab.meta["k_max"] = K
                tab.grid = g
                return tab
            K *= 2

    def hs_terms(self):
        """|R_k|^2 binom(k+n-1, k) = |R_k|^2 / c_{n,k}."""
        return np.abs(self.R) ** 2 * np.exp(-self.log_c)[:, None]

    def tail_estimate(self):
        T = self.hs_terms()
        if self.k_max < 2:
            return 0.0
        peak = T.max(axis=0)
        last, prev = T[-1], T[-2]
        q = np.where(prev > 0, last / np.where(prev > 0, prev, 1), 0.0)
        q = np.minimum(q, 0.999)
        tail = np.where(last <= 1e-28 * peak, 0.0, last * q / (1 - q))
        wts = np.abs(self.lam) ** self.n * (self.wlam if self.wlam is not None else 1.0)
        total = float(np.sum(wts * T.sum(axis=0)))
        return float(np.sum(wts * tail)) / total if total > 0 else 0.0

    def fan_l2_sq(self, multiplier=None):
        """(2pi)^{-n-1} int |lam|^n sum_k m(k, lam) |R_k|^2 / c_{n,k} dlam.

        This is int |f~|^2 dw dnu_2 with the w-integral done in closed form.
        """
        T = self.hs_terms()
        if multiplier is not None:
            T = T * multiplier(np.arange(self.k_max + 1)[:, None], self.lam[None, :])
        w = self.wlam * np.abs(self.lam) ** self.n
        return (2 * math.pi) ** (-self.n - 1) * float(np.sum(T.sum(axis=0) * w))

    def active_mask(self, rel=1e-9):
        """Rays whose coefficient matters: |R_k| above rel * max over k, per lambda."""
        A = np.abs(self.normalized)
        return A > rel * A.max(axis=0, keepdims=True)

    def fan_quadrature(self, kmax=None):
        kmax = self.k_max if kmax is None else kmax
        return FanQuadrature(self.n, self.lam, self.wlam, kmax)

    def to_json(self):
        return json.dumps(dict(schema=SCHEMA, n=self.n, lam=self.lam.tolist(),
                               wlam=None if self.wlam is None else self.wlam.tolist(),
                               R=[[[z.real, z.imag] for z in row] for row in self.R],
                               meta=_jsonable(self.meta)))

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        if d.get("schema") != SCHEMA:
            raise ValueError(f"unsupported SpectralTable schema {d.get('schema')}")
        R = np.array([[complex(a, b) for a, b in row] for row in d["R"]])
        return cls(d["n"], d["lam"], d["wlam"], R, d["meta"])


def _jsonable(d):
    from .report import _clean
    return _clean(d)


def _coefficients(f, lam, grid, K):
    n = f.n
    mu, inv = np.unique(np.abs(lam), return_inverse=True)
    if np.any(mu == 0):
        raise ValueError("lambda = 0 is not on the fan; use strichartz_limit_ray")
    C, S = _central_parts(f, mu, grid)
    r = grid.r_nodes
    wr = grid.r_weights * sphere_area(n) * r ** (2 * n - 1)
    g = np.vstack([C * wr, S * wr])
    P = kernels.laguerre_projections(np.concatenate([mu, mu]), r * r, g, float(n - 1), K)
    PC, PS = P[:mu.size], P[mu.size:]
    c = np.exp(np.asarray(log_cnk(n, np.arange(K + 1))))
    sign = np.sign(lam)
    # f^{-lam} = C - i sign(lam) S
    R = c[:, None] * (PC[inv].T - 1j * sign[None, :] * PS[inv].T)
    return R


def laguerre_coeff(f, k, lam, grid=None):
    """R^{n-1}_k(-lam, f) = c_{n,k} int f^{-lam} phi_{k,lam} dz."""
    if lam == 0:
        raise ValueError("lambda must be nonzero")
    g = grid if grid is not None else spectral_grid(f, max(k, 1))
    return complex(_coefficients(f, np.array([float(lam)]), g, k)[k, 0])


def strichartz_transform(f, a, w_radius, grid=None):
    """f~(a, w) for a FanPoint a and |w| = w_radius."""
    R = laguerre_coeff(f, a.k, a.lam, grid)
    return cnk(f.n, a.k) * R * laguerre_fn(a.k, f.n, a.lam, w_radius)


def strichartz_limit_ray(f, tau, w_radius, grid=None):
    """f^(0, tau, w) on the limiting ray.

    With j(x) = (n-1)! 2^{n-1} J_{n-1}(x)/x^{n-1}, the spherical average of
    j(sqrt(tau)|w - z|) factors, so for radial f the value is
    j(sqrt(tau)|w|) int f^0(|z|) j(sqrt(tau)|z|) dz.
    """
    if tau < 0:
        raise ValueError("tau must be >= 0")
    n = f.n
    g = grid if grid is not None else spectral_grid(f, 1)
    r = g.r_nodes
    f0 = f.central_fourier(np.array([0.0]), r, g.t_nodes, g.t_weights)[0].real
    norm = math.factorial(n - 1) * 2.0 ** (n - 1)
    st = math.sqrt(tau)
    jr = norm * bessel_ratio(n - 1, st * r)
    jw = norm * bessel_ratio(n - 1, st * w_radius)
    return float(jw * np.sum(g.r_weights * sphere_area(n) * r ** (2 * n - 1) * f0 * jr))


# ------------------------------------------------------------------ checks


def space_l2_sq(f, grid):
    return integrate_hn_radial(lambda r, t: np.asarray(f.profile(r, t)) ** 2, f.n, grid)


def fan_power_integral(table, p, weight=None, rel=1e-9):
    """int |f~|^p u dw dnu_2 by explicit w-quadrature.

    `weight(k, lam, w)` multiplies the integrand; rays with negligible
    coefficients are skipped.
    """
    fq = table.fan_quadrature()
    A = np.abs(table.normalized)
    act = table.active_mask(rel)

    def phi(ray):
        amp = A[ray.k, ray.idx][:, None] ** p * np.abs(ray.psi) ** p
        if weight is not None:
            amp = amp * weight(ray.k, ray.lam, ray.w)
        return amp

    return fq.integrate(phi, active=act)


def plancherel_check(f, table=None, tol=1e-6):
    """Compare int |f|^2 on H^n with int |f~|^2 dw dnu_2 on the fan."""
    table = table if table is not None else SpectralTable.build(f)
    g = table.grid
    lhs = space_l2_sq(f, g)
    rhs = fan_power_integral(table, 2)
    closed = table.fan_l2_sq()
    if lhs == 0:
        rel = 0.0 if rhs == 0 else float("inf")
    else:
        rel = abs(lhs - rhs) / lhs
    meta = dict(rel_err=rel, fan_closed_w=closed, rel_err_closed_w=abs(lhs - closed) / lhs if lhs else 0.0,
                calibration_ratio=rhs / lhs if lhs else 1.0, normalization="f~ = c_{n,k} R_k phi_k",
                k_max=table.k_max, tail=table.meta.get("tail"), grid=g.meta, function=repr(f),
                exact_l2_sq=f.l2_norm_sq())
    return VerificationReport("plancherel", lhs, rhs, 1.0, tol - rel, rel <= tol, meta)


def inversion(table, r, t):
    """(2pi)^{-n-1} int e^{i lam t} |lam|^n sum_k R_k phi_{k,lam}(r) dlam.

    The w-integral of the inversion formula is done with the reproducing
    property of phi_k under twisted convolution.
    """
    n = table.n
    mu = np.abs(table.lam)
    x = 0.5 * mu * r * r
    T = kernels.laguerre_table(x, float(n - 1), table.k_max)
    # T[k, j] = psi_k(x_j): phi_{k, lam_j}(r)
    inner = np.sum(table.R * T, axis=0)
    val = np.sum(table.wlam * mu ** n * np.exp(1j * table.lam * t) * inner)
    return complex(val * (2 * math.pi) ** (-n - 1))


def inversion_check(f, sample_points, table=None):
    """Max |f(z,t) - inverse(f~)(z,t)| over HPoints."""
    table = table if table is not None else SpectralTable.build(f)
    errs = []
    for p in sample_points:
        rec = inversion(table, p.zabs, p.t)
        errs.append(abs(rec - float(f.profile(p.zabs, p.t))))
    return float(max(errs)) if errs else 0.0


def sup_lattice(f, lam_lattice, k_max, w_radii, grid=None):
    """sup over (k, lam, w) of |f~| on a lattice (no quadrature in lambda)."""
    g = grid if grid is not None else spectral_grid(f, k_max, lam_max=float(np.max(np.abs(lam_lattice))))
    R = _coefficients(f, np.asarray(lam_lattice, dtype=float), g, k_max)
    c = np.exp(np.asarray(log_cnk(f.n, np.arange(k_max + 1))))
    A = np.abs(R) * c[:, None]
    best = 0.0
    for j, lam in enumerate(lam_lattice):
        x = 0.5 * abs(lam) * np.asarray(w_radii) ** 2
        T = np.abs(kernels.laguerre_table(x, float(f.n - 1), k_max))
        best = max(best, float(np.max(A[:, j, None] * T)))
    return best


def default_sup_lattice(f, density=1):
    lam_max = f.lam_extent
    pos = np.geomspace(1e-4, lam_max, 40 * density)
    lam = np.concatenate([-pos[::-1], pos])
    w = np.concatenate([[0.0], np.geomspace(1e-2, 10.0, 30 * density)])
    return lam, w


def sup_bound_check(f, density=1, k_max=64):
    """sup |f~| / ||f||_1 on a lattice; the transform of an L^1 function is bounded."""
    lam, w = default_sup_lattice(f, density)
    grid = spectral_grid(f, k_max, refine=density)
    s = sup_lattice(f, lam, k_max, w, grid)
    l1 = f.l1_norm()
    if l1 is None:
        l1 = integrate_hn_radial(lambda r, t: np.abs(f.profile(r, t)), f.n, grid)
    return s / l1 if l1 > 0 else 0.0


def derivative_multiplier_check(f, k_max=64, n_lambda=32):
    """Transform of d/dt f against (-i lam) f~ on the (k, lam) lattice.

    Returns a dict with the error against the sign -i lam and against +i lam;
    from the definition e^{-i lam t} the derivative brings down +i lam.
    """
    g = spectral_grid(f, k_max, n_lambda)
    lam = g.lambda_nodes
    R = _coefficients(f, lam, g, k_max)
    Rd = _coefficients(f.dt(), lam, g, k_max)
    scale = float(np.max(np.abs(Rd))) or 1.0
    minus = float(np.max(np.abs(Rd - (-1j * lam)[None, :] * R))) / scale
    plus = float(np.max(np.abs(Rd - (1j * lam)[None, :] * R))) / scale
    return dict(rel_err_minus_i_lambda=minus, rel_err_plus_i_lambda=plus, k_max=k_max,
                n_lambda=int(lam.size))


def dilation_covariance_check(f, r, k_max=64, n_lambda=32, w_radii=(0.0, 0.5, 1.0, 2.0)):
    """f~ of delta_r f at (a, w) against r^{-Q} f~(r^{-2} a, r w) on a lattice."""
    n = f.n
    fd = f.dilate(r)
    gd = spectral_grid(fd, k_max, n_lambda)
    lam = gd.lambda_nodes
    Rd = _coefficients(fd, lam, gd, k_max)
    # refine the undilated side so the two quadratures are not scaled copies
    g = spectral_grid(f, k_max, n_lambda, refine=2, lam_max=float(np.max(np.abs(lam))) / r ** 2)
    R = _coefficients(f, lam / r ** 2, g, k_max)
    Qd = 2 * n + 2
    c = np.exp(np.asarray(log_cnk(n, np.arange(k_max + 1))))
    err = 0.0
    scale = 0.0
    for w in w_radii:
        x1 = 0.5 * np.abs(lam) * w * w
        x2 = 0.5 * np.abs(lam / r ** 2) * (r * w) ** 2
        T1 = kernels.laguerre_table(x1, float(n - 1), k_max)
        T2 = kernels.laguerre_table(x2, float(n - 1), k_max)
        left = c[:, None] * Rd * T1
        right = r ** (-Qd) * c[:, None] * R * T2
        err = max(err, float(np.max(np.abs(left - right))))
        scale = max(scale, float(np.max(np.abs(left))))
    return err / scale if scale > 0 else 0.0


def hausdorff_young_ratio(f, p, table=None):
    """||f~||_{L^{p'}(nu_2 x dw)} / ||f||_p for p in (1, 2]; p = 1 uses the sup."""
    if p == 1:
        return sup_bound_check(f)
    table = table if table is not None else SpectralTable.build(f)
    q = p / (p - 1)
    lhs = fan_power_integral(table, q) ** (1 / q)
    if isinstance(f, Gaussian):
        rhs = f.lp_norm(p)
    else:
        rhs = integrate_hn_radial(lambda r, t: np.abs(f.profile(r, t)) ** p, f.n, table.grid) ** (1 / p)
    return lhs / rhs


def hs_proxy_check(table, k, j):
    """int |f~(a, .)|^2 dw by w-quadrature against c^2 (2pi)^n |lam|^{-n} |R_k|^2 binom."""
    from scipy import integrate as si
    n = table.n
    lam = table.lam[j]
    ck = float(np.exp(table.log_c[k]))
    amp = abs(ck * table.R[k, j]) ** 2

    def integrand(rho):
        return amp * laguerre_fn(k, n, lam, rho) ** 2 * sphere_area(n) * rho ** (2 * n - 1)

    upper = math.sqrt(2 * (4 * k + 2 * n + 80) / abs(lam))
    direct, _ = si.quad(integrand, 0, upper, limit=400, epsabs=0, epsrel=1e-12)
    proxy = abs(table.R[k, j]) ** 2 / ck
    closed = ck ** 2 * (2 * math.pi) ** n * abs(lam) ** (-n) * proxy
    return abs(direct - closed) / closed if closed else abs(direct)
