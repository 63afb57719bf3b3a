"""Distribution functions and decreasing rearrangements on H^n and on the fan.

Weights are small parametric objects. Each knows its own distribution
function d(M) = |{value > M}|, in closed form where one exists, and
`decreasing_rearrangement` inverts d by bisection in log M.
"""
import csv
import io
import json
import math

import numpy as np
from scipy import special

from .functions import RadialFunction
from .geometry import FanQuadrature, gauss_panels, homnorm_rt, sphere_area

INF = float("inf")

_U, _UW = gauss_panels(np.array([0.0, 0.5, 1.0]), 24)


# ------------------------------------------------------------- k-sums


def binom_sq_poly(n, shift):
    """binom(k+n-1, k)^2 as a polynomial in m = k + (n+shift)/2 (numpy poly1d)."""
    q = (n + shift) / 2.0
    p = np.poly1d([1.0])
    for i in range(1, n):
        # k + i = m - q + i
        p = p * np.poly1d([1.0, i - q])
    p = p * p
    return p / math.factorial(n - 1) ** 2


def binom_sq_sum(n, p, shift=0):
    """S(p) = sum_k binom(k+n-1, k)^2 (2k+n+shift)^{-p} via Hurwitz zeta.

    Converges for p > 2n - 1.
    """
    if p <= 2 * n - 1:
        return INF
    poly = binom_sq_poly(n, shift)
    q = (n + shift) / 2.0
    total = 0.0
    deg = poly.order
    for j, c in enumerate(poly.coeffs[::-1]):
        if j > deg or c == 0:
            continue
        total += c * special.zeta(p - j, q)
    return float(total * 2.0 ** (-p))


def binom_sq_sum_direct(n, p, shift=0, terms=200000):
    k = np.arange(terms, dtype=float)
    b = np.exp(special.gammaln(k + n) - special.gammaln(k + 1) - math.lgamma(n))
    return float(np.sum(b * b * (2 * k + n + shift) ** (-p)))


# ------------------------------------------------------------- weights


class Weight:
    domain = "Hn"
    scale = 1.0
    label = "weight"
    kind = "exact"

    def scaled(self, c):
        import copy
        w = copy.copy(self)
        w.scale = self.scale * c
        return w

    def distribution(self, M):
        raise NotImplementedError

    def distribution_flag(self, M):
        d = self.distribution(M)
        return d, not np.isfinite(d)


def _level_volume(n, R, halfwidth):
    """omega int_0^R r^{2n-1} 2 T(r) dr with r = R(1 - u^2) to absorb edge roots."""
    if R <= 0:
        return 0.0
    r = R * (1.0 - _U ** 2)
    jac = 2.0 * R * _U
    T = halfwidth(r)
    return float(sphere_area(n) * np.sum(_UW * jac * r ** (2 * n - 1) * 2.0 * T))


class HomNormPower(Weight):
    """scale * N(z, t)^{2s} with N = (|z|^4 + 16 t^2)^{1/4}."""

    def __init__(self, s, n=1, scale=1.0, label=None):
        self.s, self.n, self.scale = float(s), int(n), float(scale)
        self.label = label or f"N^{2 * self.s:g}"

    def profile(self, r, t):
        return self.scale * homnorm_rt(r, t) ** (2 * self.s)

    def reciprocal(self):
        return HomNormPower(-self.s, self.n, 1.0 / self.scale, label=f"1/({self.label})")

    def level_radius(self, M):
        # N^{2s} > M/scale, s < 0  <=>  N < (M/scale)^{1/(2s)}
        return (M / self.scale) ** (1.0 / (2 * self.s))

    def level_halfwidth(self, r, M):
        R = self.level_radius(M)
        return np.sqrt(np.maximum(R ** 4 - np.asarray(r) ** 4, 0.0)) / 4.0

    def ball_constant(self):
        """|{N < 1}| = pi^n B(n/2, 3/2) / (4 Gamma(n))."""
        n = self.n
        return math.pi ** n * special.beta(n / 2.0, 1.5) / (4.0 * math.gamma(n))

    def distribution(self, M):
        if self.s >= 0:
            return INF if (self.s > 0 or M < self.scale) else 0.0
        R = self.level_radius(M)
        return _level_volume(self.n, R, lambda r: self.level_halfwidth(r, M))

    def distribution_closed(self, M):
        if self.s >= 0:
            return self.distribution(M)
        return self.ball_constant() * self.level_radius(M) ** (2 * self.n + 2)


def Valpha(alpha, n=1):
    """v_alpha = N^alpha = (|z|^4 + 16 t^2)^{alpha/4}."""
    if not alpha > 0:
        raise ValueError("v_alpha needs alpha > 0")
    return HomNormPower(alpha / 2.0, n, label=f"v_{alpha:g}")


class ZPower(Weight):
    """scale * |z|^{2s}; its level sets are cylinders of infinite measure."""

    def __init__(self, s, n=1, scale=1.0):
        self.s, self.n, self.scale = float(s), int(n), float(scale)
        self.label = f"|z|^{2 * self.s:g}"

    def profile(self, r, t):
        return self.scale * np.asarray(r, dtype=float) ** (2 * self.s) * np.ones_like(np.asarray(t, dtype=float))

    def distribution(self, M):
        if self.s == 0 and M >= self.scale:
            return 0.0
        return INF


class NonHomog(Weight):
    """scale * ((delta + |z|^2/4)^2 + t^2)^{s/2}."""

    def __init__(self, s, delta=1.0, n=1, scale=1.0):
        if not delta > 0:
            raise ValueError("delta must be positive")
        self.s, self.delta, self.n, self.scale = float(s), float(delta), int(n), float(scale)
        self.label = f"nonhomog(s={self.s:g}, delta={self.delta:g})"

    def profile(self, r, t):
        r = np.asarray(r, dtype=float)
        t = np.asarray(t, dtype=float)
        return self.scale * ((self.delta + r * r / 4) ** 2 + t * t) ** (self.s / 2)

    def distribution(self, M):
        if self.s >= 0:
            return INF if (self.s > 0 or M < self.scale) else 0.0
        A = (M / self.scale) ** (2.0 / self.s)
        if A <= self.delta ** 2:
            return 0.0
        R = 2.0 * math.sqrt(math.sqrt(A) - self.delta)
        return _level_volume(self.n, R, lambda r: np.sqrt(np.maximum(A - (self.delta + r * r / 4) ** 2, 0.0)))


class SampledMeasure(Weight):
    """A step function given by values with masses (exact rearrangement)."""

    kind = "sampled"

    def __init__(self, values, masses, domain="Hn", label="sampled"):
        v = np.abs(np.asarray(values, dtype=float)).ravel()
        m = np.broadcast_to(np.asarray(masses, dtype=float), np.shape(values)).ravel()
        order = np.argsort(-v, kind="stable")
        self.values = v[order]
        self.masses = m[order]
        self.cum = np.cumsum(self.masses)
        self.domain = domain
        self.label = label

    def distribution(self, M):
        M = np.asarray(M, dtype=float)
        # number of values strictly above M
        idx = np.searchsorted(-self.values, -M * self.scale ** -1, side="left")
        out = np.where(idx > 0, self.cum[np.maximum(idx - 1, 0)], 0.0)
        return out if out.ndim else float(out)

    def rearrangement(self, t):
        t = np.asarray(t, dtype=float)
        j = np.searchsorted(self.cum, t, side="right")
        vals = np.where(j < self.values.size, self.values[np.minimum(j, self.values.size - 1)], 0.0)
        return self.scale * vals


class SampledHn(Weight):
    """|F| of an arbitrary callable on H^n, rearranged through quadrature masses."""

    kind = "sampled"

    def __init__(self, func, n, grid):
        self.func, self.n, self.grid = func, int(n), grid
        r = grid.r_nodes[:, None]
        t = grid.t_nodes[None, :]
        vals = np.abs(np.asarray(func(r, t), dtype=float)) * np.ones((r.size, t.size))
        masses = (grid.r_weights * sphere_area(n) * grid.r_nodes ** (2 * n - 1))[:, None] * grid.t_weights[None, :]
        self._m = SampledMeasure(vals, masses)
        self.label = "sampled-Hn"

    def profile(self, r, t):
        return self.scale * np.abs(self.func(r, t))

    def distribution(self, M):
        return self._m.distribution(M / self.scale)


class FunctionModulus(Weight):
    """|f| for a RadialFunction with explicit level sets (Gaussian, bump)."""

    def __init__(self, f):
        self.f = f
        self.n = f.n
        self.label = f"|{f!r}|"

    def profile(self, r, t):
        return self.scale * np.abs(self.f.profile(r, t))

    def distribution(self, M):
        M = M / self.scale
        R = self.f.level_radius(M)
        return _level_volume(self.n, R, lambda r: self.f.level_halfwidth(r, M))


# ------------------------------------------------------------- fan weights


class Urho(Weight):
    """(|a| + |w|)^{-rho} with |a| = (2k+n+1)|lambda|.

    mode "exact" uses the exact measure of {u > M}; mode "containment"
    uses the measure of the larger set {|w| < R, (2k+n)|lambda| < R},
    R = M^{-1/rho}, an upper bound for d(M).
    """

    domain = "Fan"

    def __init__(self, rho, n=1, mode="containment", scale=1.0):
        if not rho > 0:
            raise ValueError("u_rho needs rho > 0")
        if mode not in ("exact", "containment"):
            raise ValueError("mode must be 'exact' or 'containment'")
        self.rho, self.n, self.mode, self.scale = float(rho), int(n), mode, float(scale)
        self.kind = "exact" if mode == "exact" else "upper-bound"
        self.label = f"u_rho({self.rho:g}, {mode})"

    def value(self, k, lam, w):
        return self.scale * ((2 * k + self.n + 1) * np.abs(lam) + np.abs(w)) ** (-self.rho)

    def constant(self):
        n = self.n
        base = (2 * math.pi) ** (-2 * n - 1) * math.pi ** n / math.factorial(n) * 2.0
        if self.mode == "exact":
            return base * special.beta(2 * n + 1, 2 * n + 1) * binom_sq_sum(n, 2 * n + 1, shift=1)
        return base / (2 * n + 1) * binom_sq_sum(n, 2 * n + 1, shift=0)

    @property
    def exponent(self):
        """d(M) = K M^{exponent}."""
        return -(4 * self.n + 1) / self.rho

    def distribution(self, M):
        M = np.asarray(M, dtype=float) / self.scale
        out = self.constant() * M ** self.exponent
        return out if out.ndim else float(out)


class UsigmaRho(Weight):
    """((2k+n)|lambda|)^{-sigma} |w|^{-rho} on |lambda| > 1, zero elsewhere."""

    domain = "Fan"

    def __init__(self, sigma, rho, n=1, scale=1.0):
        if not (sigma > 0 and rho > 0):
            raise ValueError("u_{sigma,rho} needs sigma, rho > 0")
        self.sigma, self.rho, self.n, self.scale = float(sigma), float(rho), int(n), float(scale)
        self.label = f"u_sigma_rho({self.sigma:g}, {self.rho:g})"

    @property
    def integrable(self):
        return self.sigma > self.rho * (2 * self.n + 1) / (2 * self.n)

    def value(self, k, lam, w):
        lam = np.asarray(lam, dtype=float)
        v = ((2 * k + self.n) * np.abs(lam)) ** (-self.sigma) * np.abs(w) ** (-self.rho)
        return self.scale * np.where(np.abs(lam) > 1, v, 0.0)

    def constant(self):
        n = self.n
        p = 2 * n * self.sigma / self.rho
        if not self.integrable:
            return INF
        return (2 * math.pi) ** (-2 * n - 1) * math.pi ** n / math.factorial(n) * 2.0 \
            * binom_sq_sum(n, p, 0) / (p - 2 * n - 1)

    @property
    def exponent(self):
        return -2.0 * self.n / self.rho

    def distribution(self, M):
        M = np.asarray(M, dtype=float) / self.scale
        if not self.integrable:
            out = np.full(M.shape, INF)
        else:
            out = self.constant() * M ** self.exponent
        return out if out.ndim else float(out)


class SampledFan(Weight):
    """A fan function value(k, lam, w) rearranged through fan quadrature masses."""

    domain = "Fan"
    kind = "sampled"

    def __init__(self, value, fq):
        self._value = value
        vals, masses = fan_samples(fq, value)
        self._m = SampledMeasure(vals, masses, domain="Fan")
        self.label = "sampled-fan"

    def value(self, k, lam, w):
        return self.scale * self._value(k, lam, w)

    def distribution(self, M):
        return self._m.distribution(M / self.scale)


def fan_samples(fq, value, active=None):
    """Values of value(k, lam, w) on the FanQuadrature nodes with their masses."""
    vals, masses = [], []
    for k in range(fq.kmax + 1):
        cols = np.arange(fq.lam.size) if active is None else np.nonzero(active[k])[0]
        if cols.size == 0:
            continue
        j = fq.kcut[k]
        lam = fq.lam[cols][:, None]
        x = fq.x[None, :j]
        v = np.asarray(value(k, lam, fq.w_radius(lam, x), fq.table[k, None, :j]) if _wants_psi(value)
                       else value(k, lam, fq.w_radius(lam, x)), dtype=float)
        m = math.exp(2 * fq.log_binom[k]) * fq.lam_factor[cols][:, None] * fq.x_weight[None, :j]
        vals.append(np.abs(v).ravel())
        masses.append(np.broadcast_to(m, v.shape).ravel())
    if not vals:
        return np.zeros(0), np.zeros(0)
    return np.concatenate(vals), np.concatenate(masses)


def _wants_psi(fn):
    try:
        import inspect
        return len(inspect.signature(fn).parameters) >= 4
    except (TypeError, ValueError):
        return False


def transform_modulus(table, rel=1e-8):
    """|f~| on the fan as a SampledMeasure built from a SpectralTable."""
    fq = table.fan_quadrature()
    A = np.abs(table.normalized)
    act = table.active_mask(rel)

    def value(k, lam, w, psi):
        idx = np.searchsorted(table.lam, lam[:, 0])
        return A[k, idx][:, None] * np.abs(psi) * np.ones_like(w)

    vals, masses = fan_samples(fq, value, act)
    return SampledMeasure(vals, masses, domain="Fan", label="|f~|")


def as_weight(obj):
    if isinstance(obj, Weight):
        return obj
    if isinstance(obj, RadialFunction):
        if hasattr(obj, "level_radius"):
            return FunctionModulus(obj)
        from .transform import spectral_grid
        return SampledHn(obj.profile, obj.n, spectral_grid(obj, 1, refine=2))
    raise TypeError(f"cannot take the distribution of {type(obj).__name__}")


def distribution(w, M):
    """|{|w| > M}| under dz dt (H^n) or dnu_2 dw (fan); +inf when divergent."""
    if np.any(np.asarray(M) <= 0):
        raise ValueError("levels must be positive")
    w = as_weight(w)
    if np.ndim(M):
        return np.array([w.distribution(float(m)) for m in np.ravel(M)]).reshape(np.shape(M))
    return float(w.distribution(float(M)))


# ------------------------------------------------------- rearrangements


class RearrangementTable:
    def __init__(self, t, values, domain="Hn", kind="exact", finite=True, label="", note=""):
        self.t = np.asarray(t, dtype=float)
        self.values = np.asarray(values, dtype=float)
        self.domain, self.kind, self.finite, self.label, self.note = domain, kind, finite, label, note
        if finite and np.any(np.diff(self.values) > 1e-12 * np.maximum(np.abs(self.values[:-1]), 1e-300)):
            raise AssertionError("rearrangement values must be non-increasing")
        self.slope = self.intercept = None
        if finite and np.all(self.values > 0):
            self.slope, self.intercept = fit_loglog(self.t, self.values)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return PowerLawTable(self.t, self.values).value(t)

    def fit(self, lo=None, hi=None):
        return fit_loglog(self.t, self.values, lo, hi)

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["t", "value"])
        for a, b in zip(self.t, self.values):
            w.writerow([repr(float(a)), repr(float(b))])
        return buf.getvalue()

    def to_json(self):
        from .report import _clean
        return json.dumps(_clean(dict(schema=1, label=self.label, domain=self.domain, kind=self.kind,
                                      finite=self.finite, slope=self.slope, intercept=self.intercept,
                                      note=self.note, t=self.t, values=self.values)))


def fit_loglog(t, v, lo=None, hi=None, trim=0.1):
    """Least-squares slope and intercept of log v against log t.

    Uses nodes in [lo, hi] (default: all) and drops the outer `trim`
    fraction at each end.
    """
    t = np.asarray(t, dtype=float)
    v = np.asarray(v, dtype=float)
    sel = np.ones(t.size, bool)
    if lo is not None:
        sel &= t >= lo
    if hi is not None:
        sel &= t <= hi
    sel &= v > 0
    idx = np.nonzero(sel)[0]
    cut = int(math.floor(trim * idx.size))
    if cut:
        idx = idx[cut:-cut]
    if idx.size < 2:
        return float("nan"), float("nan")
    slope, icpt = np.polyfit(np.log(t[idx]), np.log(v[idx]), 1)
    return float(slope), float(icpt)


def decreasing_rearrangement(w, t_grid=None, rtol=1e-10):
    """f*(t) = inf{s > 0 : d(s) <= t}, by bisection in log s."""
    t = np.geomspace(1e-6, 1e6, 241) if t_grid is None else np.asarray(t_grid, dtype=float)
    w = as_weight(w)
    if isinstance(w, SampledMeasure):
        return RearrangementTable(t, w.rearrangement(t), w.domain, "sampled", True, w.label)
    probe = w.distribution(1.0)
    if not np.isfinite(probe):
        return RearrangementTable(t, np.full(t.shape, INF), w.domain, w.kind, False, w.label,
                                  note="distribution diverges; rearrangement infinite")
    vals = np.empty_like(t)
    for i, ti in enumerate(t):
        vals[i] = _invert(w.distribution, ti, rtol)
    # enforce exact monotonicity against bisection noise
    vals = np.minimum.accumulate(vals)
    return RearrangementTable(t, vals, w.domain, w.kind, True, w.label)


def _invert(d, t, rtol):
    lo, hi = 1.0, 1.0
    if d(lo) <= t:
        # shrink until d exceeds t or we reach the floor
        while d(lo) <= t:
            hi = lo
            lo *= 0.01
            if lo < 1e-300:
                return 0.0
    else:
        while d(hi) > t:
            lo = hi
            hi *= 100.0
            if hi > 1e300:
                return INF
    a, b = math.log(lo), math.log(hi)
    while b - a > rtol:
        m = 0.5 * (a + b)
        if d(math.exp(m)) > t:
            a = m
        else:
            b = m
    return math.exp(b)


# ------------------------------------------------- power-law table calculus


class PowerLawTable:
    """g on (0, inf) from samples, piecewise power law between nodes.

    Beyond the ends g continues with the exponent of the outermost segment
    (or `head`/`tail` if given). Integrals over (0, x) and (x, inf) are exact
    for that interpolant and +inf when the extension diverges.
    """

    def __init__(self, t, g, head=None, tail=None):
        self.t = np.asarray(t, dtype=float)
        self.g = np.asarray(g, dtype=float)
        lt = np.log(self.t)
        pos = (self.g[:-1] > 0) & (self.g[1:] > 0)
        with np.errstate(divide="ignore", invalid="ignore"):
            e = np.where(pos, (np.log(np.where(pos, self.g[1:], 1)) - np.log(np.where(pos, self.g[:-1], 1)))
                         / np.diff(lt), 0.0)
        self.e = e
        self.pos = pos
        self.seg = np.array([self._seg_int(i, self.t[i + 1]) for i in range(self.t.size - 1)])
        self.head_e = head if head is not None else (e[0] if pos[0] else None)
        self.tail_e = tail if tail is not None else (e[-1] if pos[-1] else None)
        self.cum = np.concatenate([[0.0], np.cumsum(self.seg)])

    def _seg_int(self, i, x):
        # int_{t_i}^{x} of the interpolant on segment i
        t0, g0 = self.t[i], self.g[i]
        if not self.pos[i]:
            t1, g1 = self.t[i + 1], self.g[i + 1]
            gx = g0 + (g1 - g0) * (x - t0) / (t1 - t0)
            return 0.5 * (g0 + gx) * (x - t0)
        return _pl_int(g0, t0, self.e[i], x)

    def value(self, x):
        x = np.asarray(x, dtype=float)
        out = np.empty(x.shape)
        flat = x.ravel()
        res = out.ravel()
        for j, v in enumerate(flat):
            if v <= self.t[0]:
                res[j] = self.g[0] * (v / self.t[0]) ** (self.head_e or 0.0) if self.g[0] > 0 else 0.0
            elif v >= self.t[-1]:
                res[j] = self.g[-1] * (v / self.t[-1]) ** (self.tail_e or 0.0) if self.g[-1] > 0 else 0.0
            else:
                i = np.searchsorted(self.t, v) - 1
                if self.pos[i]:
                    res[j] = self.g[i] * (v / self.t[i]) ** self.e[i]
                else:
                    res[j] = self.g[i] + (self.g[i + 1] - self.g[i]) * (v - self.t[i]) / (self.t[i + 1] - self.t[i])
        return res.reshape(x.shape) if x.ndim else float(res[0])

    def head(self):
        if self.g[0] == 0:
            return 0.0
        e = self.head_e
        if e is None or e <= -1 + 1e-9:
            return INF
        return self.g[0] * self.t[0] / (e + 1)

    def tail(self):
        if self.g[-1] == 0:
            return 0.0
        e = self.tail_e
        if e is None or e >= -1 - 1e-9:
            return INF
        return -self.g[-1] * self.t[-1] / (e + 1)

    def int_below(self, x):
        """int_0^x g."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.empty(x.shape)
        h = self.head()
        for j, v in enumerate(x):
            if v <= self.t[0]:
                if self.g[0] == 0:
                    out[j] = 0.0
                elif not np.isfinite(h):
                    out[j] = INF
                else:
                    out[j] = h * (v / self.t[0]) ** (self.head_e + 1)
            elif v >= self.t[-1]:
                extra = _pl_int(self.g[-1], self.t[-1], self.tail_e or 0.0, v) if self.g[-1] > 0 else 0.0
                out[j] = h + self.cum[-1] + extra
            else:
                i = np.searchsorted(self.t, v) - 1
                out[j] = h + self.cum[i] + self._seg_int(i, v)
        return out

    def int_above(self, x):
        """int_x^inf g."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.empty(x.shape)
        tl = self.tail()
        rev = self.cum[-1] - self.cum  # int_{t_i}^{t_N}
        for j, v in enumerate(x):
            if v >= self.t[-1]:
                if self.g[-1] == 0:
                    out[j] = 0.0
                elif not np.isfinite(tl):
                    out[j] = INF
                else:
                    out[j] = tl - _pl_int(self.g[-1], self.t[-1], self.tail_e, v)
            elif v <= self.t[0]:
                hpart = 0.0
                if self.g[0] > 0:
                    h = self.head()
                    if np.isfinite(h):
                        hpart = h - h * (v / self.t[0]) ** (self.head_e + 1)
                    else:
                        hpart = _pl_int(self.g[0], self.t[0], self.head_e, v) * -1.0
                out[j] = tl + rev[0] + hpart
            else:
                i = np.searchsorted(self.t, v) - 1
                out[j] = tl + rev[i + 1] + (self.seg[i] - self._seg_int(i, v))
        return out

    def sup_below(self, x):
        """ess sup of g on (0, x)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.empty(x.shape)
        head_inf = self.g[0] > 0 and self.head_e is not None and self.head_e < 0
        for j, v in enumerate(x):
            if head_inf:
                out[j] = INF
                continue
            sel = self.t < v
            vals = list(self.g[sel]) + [self.value(min(v, self.t[-1] * 10))]
            out[j] = max(vals)
        return out

    def sup_above(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.empty(x.shape)
        tail_inf = self.g[-1] > 0 and self.tail_e is not None and self.tail_e > 0
        for j, v in enumerate(x):
            if tail_inf:
                out[j] = INF
                continue
            sel = self.t > v
            vals = list(self.g[sel]) + [self.value(v)]
            out[j] = max(vals)
        return out


def _pl_int(g0, t0, e, x):
    # int_{t0}^{x} g0 (s/t0)^e ds
    if abs(e + 1) < 1e-12:
        return g0 * t0 * math.log(x / t0)
    return g0 * t0 / (e + 1) * ((x / t0) ** (e + 1) - 1.0)


# ------------------------------------------------------------- checks


def lp_integral_hn(f, p, grid):
    from .geometry import integrate_hn_radial
    return integrate_hn_radial(lambda r, t: np.abs(f.profile(r, t)) ** p, f.n, grid)


def _support_grid(w, sup, nodes=1200, decades=8):
    # t-grid up to just inside the measure where |f| drops to 1e-16 of its sup
    hi = w.distribution(sup * 1e-16)
    if not np.isfinite(hi) or hi <= 0:
        hi = 1e4
    return np.geomspace(hi * 10.0 ** -decades, hi * (1 - 1e-9), nodes)


def table_lp_integral(table, p):
    """int_0^{t_N} (f*)^p dt plus the power-law head below t_0."""
    pl = PowerLawTable(table.t, table.values ** p)
    return float(pl.head() + pl.cum[-1])


def rearrangement_norm_identity_check(f, p, t_grid=None, grid=None):
    """|int |f|^p - int_0^inf (f*)^p dt| / int |f|^p."""
    from .transform import spectral_grid
    grid = grid if grid is not None else spectral_grid(f, 1, refine=2)
    lhs = lp_integral_hn(f, p, grid)
    if lhs == 0:
        return 0.0
    w = as_weight(f)
    sup = float(np.max(np.abs(f.profile(grid.r_nodes[:, None], grid.t_nodes[None, :]))))
    t = _support_grid(w, sup) if t_grid is None else t_grid
    rhs = table_lp_integral(decreasing_rearrangement(w, t), p)
    return abs(lhs - rhs) / lhs


def two_function_inequality_check(f, g, p, grid=None, t_grid=None):
    """RHS - LHS of (int ((1/g)*^{-1} f*)^p)^{1/p} <= (int |f g|^p)^{1/p}.

    g is an H^n weight with a closed reciprocal (HomNormPower) or the
    constant 1 (pass None).
    """
    from .geometry import integrate_hn_radial
    from .transform import spectral_grid
    grid = grid if grid is not None else spectral_grid(f, 1, refine=2)
    gprof = (lambda r, t: 1.0) if g is None else g.profile
    rhs = integrate_hn_radial(lambda r, t: np.abs(f.profile(r, t) * gprof(r, t)) ** p, f.n, grid) ** (1 / p)
    if rhs == 0:
        return 0.0
    wf = as_weight(f)
    sup = float(np.max(np.abs(f.profile(grid.r_nodes[:, None], grid.t_nodes[None, :]))))
    t = _support_grid(wf, sup) if t_grid is None else t_grid
    fstar = decreasing_rearrangement(wf, t).values
    if g is None:
        ginv = np.ones_like(t)
    else:
        ginv = decreasing_rearrangement(g.reciprocal(), t).values
    integrand = (fstar / ginv) ** p
    pl = PowerLawTable(t, integrand)
    lhs = (pl.head() + pl.cum[-1]) ** (1 / p)
    return rhs - lhs
