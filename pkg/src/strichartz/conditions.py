"""Weighted Hardy, Calderon and Pitt conditions, and their empirical counterparts.

Suprema over s are taken on log-grids. Because the conditions are about
behaviour as s -> 0 and s -> inf, each supremum also fits a local power law
at both ends of the grid and reports "infinite" if the fitted exponent makes
the product grow beyond the grid.
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .functions import Gaussian
from .geometry import gauss_panels, homnorm_rt, integrate_hn_radial, sphere_area
from .rearrange import (INF, FunctionModulus, PowerLawTable, RearrangementTable, _support_grid,
                        decreasing_rearrangement, fit_loglog, transform_modulus)
from .report import VerificationReport
from .specfn import bessel_first_zero, laguerre_poly
from .transform import SpectralTable, fan_power_integral, graded_table, space_l2_sq

TREND_TOL = 1e-3


@dataclass(frozen=True)
class ExponentPair:
    p: float
    q: float

    def __post_init__(self):
        for name in ("p", "q"):
            v = getattr(self, name)
            if not (v >= 1):
                raise ValueError(f"{name} must lie in [1, inf], got {v}")

    @staticmethod
    def conj(x):
        if x == 1:
            return INF
        if x == INF:
            return 1.0
        return x / (x - 1)

    @property
    def pc(self):
        return self.conj(self.p)

    @property
    def qc(self):
        return self.conj(self.q)


def _pair(pq):
    if isinstance(pq, ExponentPair):
        return pq
    return ExponentPair(*pq)


@dataclass
class SupResult:
    supremum: float
    verdict: bool
    s: np.ndarray = field(repr=False, default=None)
    values: np.ndarray = field(repr=False, default=None)
    slope_low: float = float("nan")
    slope_high: float = float("nan")
    reason: str = ""

    def __iter__(self):
        # unpacks as (supremum, verdict)
        return iter((self.supremum, self.verdict))


def supremum_with_trend(s, vals, tol=TREND_TOL, frac=0.1):
    """sup of vals over the grid, flagged infinite on divergence or end growth."""
    s = np.asarray(s, dtype=float)
    vals = np.asarray(vals, dtype=float)
    if np.any(np.isnan(vals)):
        return SupResult(INF, False, s, vals, reason="undefined product")
    if np.any(np.isinf(vals)):
        return SupResult(INF, False, s, vals, reason="divergent inner integral")
    sup = float(np.max(vals)) if vals.size else 0.0
    m = max(3, int(frac * s.size))
    lo_slope, _ = fit_loglog(s[:m], vals[:m], trim=0.0)
    hi_slope, _ = fit_loglog(s[-m:], vals[-m:], trim=0.0)
    grow = []
    if np.isfinite(hi_slope) and hi_slope > tol and vals[-1] >= 0.5 * sup:
        grow.append(f"grows like s^{hi_slope:.3g} as s -> inf")
    if np.isfinite(lo_slope) and lo_slope < -tol and vals[0] >= 0.5 * sup:
        grow.append(f"grows like s^{lo_slope:.3g} as s -> 0")
    if grow:
        return SupResult(INF, False, s, vals, lo_slope, hi_slope, "; ".join(grow))
    return SupResult(sup, True, s, vals, lo_slope, hi_slope, "bounded")


def default_s_grid(lo=1e-4, hi=1e4, nodes=200):
    return np.geomspace(lo, hi, nodes)


def _as_plt(obj, power=1.0, grid=None, breaks=()):
    """PowerLawTable of obj**power from a table, callable or (t, values) pair."""
    if isinstance(obj, RearrangementTable):
        t, v = obj.t, obj.values
    elif isinstance(obj, tuple):
        t, v = np.asarray(obj[0], dtype=float), np.asarray(obj[1], dtype=float)
    elif callable(obj):
        t = np.geomspace(1e-10, 1e10, 2001) if grid is None else np.asarray(grid, dtype=float)
        if breaks:
            extra = np.concatenate([[b * (1 - 1e-12), b * (1 + 1e-12)] for b in breaks])
            t = np.unique(np.concatenate([t, extra]))
        v = np.asarray(obj(t), dtype=float) * np.ones_like(t)
    else:
        raise TypeError("expected a RearrangementTable, callable or (t, values)")
    with np.errstate(divide="ignore"):
        g = np.where(v > 0, np.abs(v) ** power, 0.0) if power > 0 else np.where(v > 0, v ** power, INF)
    return PowerLawTable(t, g)


def _norm(value, exponent):
    # (integral)^{1/exponent} with inf/0 conventions
    if exponent == INF:
        return value
    with np.errstate(divide="ignore"):
        return np.where(np.isinf(value), INF, np.abs(value) ** (1.0 / exponent))


def _mean_below(plt_, x, exponent):
    return _norm(plt_.sup_below(x) if exponent == INF else plt_.int_below(x), exponent)


def _mean_above(plt_, x, exponent):
    return _norm(plt_.sup_above(x) if exponent == INF else plt_.int_above(x), exponent)


def _product(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    out = a * b
    # 0 * inf: one factor vanishes identically on the region
    out = np.where((a == 0) | (b == 0), 0.0, out)
    return out


# ------------------------------------------------------------- Calderon


def calderon_slope(endpoints):
    (a1, b1), (a2, b2) = endpoints
    if a1 == a2:
        raise ValueError("degenerate segment: 1/p1 = 1/p2")
    if b1 == b2:
        raise ValueError("degenerate segment: 1/q1 = 1/q2")
    return (b1 - b2) / (a1 - a2)


def calderon_S(endpoints, fstar, t):
    """S f*(t) = t^{-1/q1} int_0^{t^m} s^{1/p1-1} f + t^{-1/q2} int_{t^m}^inf s^{1/p2-1} f.

    `endpoints` are the two points (1/p_i, 1/q_i); m is the slope of the
    segment joining them.
    """
    (a1, b1), (a2, b2) = endpoints
    m = calderon_slope(endpoints)
    tab = fstar if isinstance(fstar, RearrangementTable) else None
    if tab is None:
        raise TypeError("fstar must be a RearrangementTable")
    s, f = tab.t, tab.values
    p1 = PowerLawTable(s, s ** (a1 - 1) * f)
    p2 = PowerLawTable(s, s ** (a2 - 1) * f)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    x = t ** m
    first = np.where(p1.int_below(x) == 0, 0.0, t ** (-b1) * p1.int_below(x))
    second = np.where(p2.int_above(x) == 0, 0.0, t ** (-b2) * p2.int_above(x))
    out = first + second
    return out if out.size > 1 else float(out[0])


def indicator_table(m, t=None):
    """Rearrangement table of the indicator of a set of measure m."""
    t = np.geomspace(1e-8, 1e8, 1601) if t is None else t
    t = np.unique(np.concatenate([t, [m * (1 - 1e-12), m * (1 + 1e-12)]]))
    return RearrangementTable(t, (t < m).astype(float), label=f"1_[0,{m:g})")


JOINT_ENDPOINTS = ((1.0, 0.0), (0.5, 0.5))


def joint_weak_type_check(f, refine=1, t_grid=None, table=None):
    """sup_t (f~)*(t) / S f*(t) for the segment joining (1,0) and (1/2,1/2)."""
    table = table if table is not None else SpectralTable.build(f, refine=refine)
    tm = transform_modulus(table)
    if tm.values.size == 0 or tm.values[0] == 0:
        return dict(constant=0.0, finite=True)
    w = FunctionModulus(f)
    fgrid = _support_grid(w, abs(float(f.profile(0.0, 0.0))) or 1.0, nodes=800, decades=10)
    fstar = decreasing_rearrangement(w, fgrid)
    t = np.geomspace(1e-3, 1e2, 120) if t_grid is None else t_grid
    T = tm.rearrangement(t)
    S = calderon_S(JOINT_ENDPOINTS, fstar, t)
    ratio = np.where(S > 0, T / S, 0.0)
    return dict(constant=float(np.max(ratio)), finite=bool(np.all(np.isfinite(ratio))),
                t=t, ratio=ratio, argmax=float(t[int(np.argmax(ratio))]))


# ---------------------------------------------------------- Hardy / Pitt


def hardy_condition(u1, v1, pq, variant="a", s_grid=None, breaks=()):
    """Weighted Hardy condition on (0, inf).

    variant a: sup_s (int_s^inf u1^q)^{1/q} (int_0^s v1^{-p'})^{1/p'}
    variant b: sup_s (int_0^s u1^q)^{1/q} (int_s^inf v1^{-p'})^{1/p'}
    """
    pq = _pair(pq)
    q, pc = pq.q, pq.pc
    U = _as_plt(u1, 1.0 if q == INF else q, breaks=breaks)
    V = _as_plt(v1, -1.0 if pc == INF else -pc, breaks=breaks)
    s = default_s_grid() if s_grid is None else np.asarray(s_grid, dtype=float)
    if variant == "a":
        A = _mean_above(U, s, q)
        B = _mean_below(V, s, pc)
    elif variant == "b":
        A = _mean_below(U, s, q)
        B = _mean_above(V, s, pc)
    else:
        raise ValueError("variant must be 'a' or 'b'")
    return supremum_with_trend(s, _product(A, B))


def pitt_sufficient_sup(U, V, pq, s_grid=None, v_reciprocal=False):
    """sup_s (int_0^{1/s} U^q)^{1/q} (int_0^s V^{-p'})^{1/p'}.

    U = u*, V = 1/(1/v)*. With `v_reciprocal` the second table holds (1/v)*.
    """
    pq = _pair(pq)
    q, pc = pq.q, pq.pc
    if not U.finite or not V.finite:
        s = default_s_grid() if s_grid is None else s_grid
        return SupResult(INF, False, s, np.full(np.shape(s), INF), reason="divergent rearrangement")
    Ut = _as_plt(U, q)
    vinv = (V.t, V.values) if v_reciprocal else (V.t, np.where(V.values > 0, 1.0 / np.maximum(V.values, 1e-300), INF))
    Vt = _as_plt(vinv, 1.0 if pc == INF else pc)
    s = default_s_grid() if s_grid is None else np.asarray(s_grid, dtype=float)
    A = _mean_below(Ut, 1.0 / s, q)
    B = _mean_below(Vt, s, pc)
    return supremum_with_trend(s, _product(A, B))


def pitt_22_secondary_condition(U, V, s_grid=None, v_reciprocal=False):
    """sup_s (int_{1/s}^inf U^2/t)^{1/2} (int_s^inf V^{-2}/t)^{1/2}."""
    s = default_s_grid() if s_grid is None else np.asarray(s_grid, dtype=float)
    vinv = V.values if v_reciprocal else np.where(V.values > 0, 1.0 / np.maximum(V.values, 1e-300), INF)
    Ut = PowerLawTable(U.t, U.values ** 2 / U.t)
    Vt = PowerLawTable(V.t, vinv ** 2 / V.t)
    A = _norm(Ut.int_above(1.0 / s), 2)
    B = _norm(Vt.int_above(s), 2)
    return supremum_with_trend(s, _product(A, B))


def power_table(exponent, t=None, cutoff=None):
    """RearrangementTable of t^exponent, optionally times 1_{t < cutoff}."""
    t = np.geomspace(1e-8, 1e8, 1601) if t is None else t
    if cutoff is not None:
        t = np.unique(np.concatenate([t, [cutoff * (1 - 1e-12), cutoff * (1 + 1e-12)]]))
    v = t ** exponent
    if cutoff is not None:
        v = np.where(t < cutoff, v, 0.0)
    return RearrangementTable(t, v, label=f"t^{exponent:g}")


# --------------------------------------------------- power-weight theorems


def _num(x):
    return Fraction(x).limit_denominator(10 ** 12) if isinstance(x, (int, Fraction)) else x


def _constraint(value, bound, ok):
    return dict(value=float(value), bound=float(bound), passed=bool(ok))


def _conj(p):
    return ExponentPair.conj(p)


def power_weight_sufficient(n, pq, alpha, rho, sigma=None, tol=1e-12):
    """Sufficient conditions for the weight pairs (v_alpha, u_rho) and (v_alpha, u_{sigma,rho})."""
    pq = _pair(pq)
    p, q = pq.p, pq.q
    pc = pq.pc
    c = {}
    c["1<p<=q<inf"] = _constraint(p, q, 1 < p <= q < INF)
    c["alpha>0"] = _constraint(alpha, 0, alpha > 0)
    c["rho>0"] = _constraint(rho, 0, rho > 0)
    c["alpha*p'<2(n+1)"] = _constraint(alpha * pc, 2 * (n + 1), alpha * pc < 2 * (n + 1))
    if sigma is None:
        c["q*rho<4n+1"] = _constraint(q * rho, 4 * n + 1, q * rho < 4 * n + 1)
        bal = -alpha / (2 * (n + 1)) + 1 / pc + rho / (4 * n + 1) - 1 / q
    else:
        c["sigma>0"] = _constraint(sigma, 0, sigma > 0)
        c["rho(2n+1)<2n*sigma"] = _constraint(rho * (2 * n + 1), 2 * n * sigma, rho * (2 * n + 1) < 2 * n * sigma)
        c["q*rho<2n"] = _constraint(q * rho, 2 * n, q * rho < 2 * n)
        bal = -alpha / (2 * (n + 1)) + 1 / pc + rho / (2 * n) - 1 / q
    c["balance=0"] = _constraint(bal, 0, abs(bal) <= tol)
    failed = [k for k, v in c.items() if not v["passed"]]
    return dict(verdict=not failed, constraints=c, binding=failed,
                pair="v_alpha,u_rho" if sigma is None else "v_alpha,u_sigma_rho")


def power_weight_necessary(n, pq, alpha, rho, sigma=None, tol=1e-12):
    """Necessary conditions for the same pairs, with the case split on q*sigma."""
    pq = _pair(pq)
    p, q = pq.p, pq.q
    pc = pq.pc
    c = {}
    c["1<p,q<inf"] = _constraint(p, q, 1 < p < INF and 1 < q < INF)
    c["alpha>0"] = _constraint(alpha, 0, alpha > 0)
    c["rho>0"] = _constraint(rho, 0, rho > 0)
    c["alpha*p'<2(n+1)"] = _constraint(alpha * pc, 2 * (n + 1), alpha * pc < 2 * (n + 1))
    case = None
    if sigma is None:
        X = -(n + 1) / q - alpha / 2 + (n + 1) / pc
        c["-rho<X"] = _constraint(X, -rho, -rho < X)
        c["X<rho/2"] = _constraint(X, rho / 2, X < rho / 2)
    else:
        c["sigma>0"] = _constraint(sigma, 0, sigma > 0)
        c["q*rho<2n"] = _constraint(q * rho, 2 * n, q * rho < 2 * n)
        Y = -alpha / 2 + (n + 1) / pc + (2 * n - q * rho) / (2 * q)
        qs = q * sigma
        if abs(qs - (2 * n + 1)) <= tol:
            case = "q*sigma=2n+1"
            c["Y>0"] = _constraint(Y, 0, Y > tol)
        elif qs < 2 * n + 1:
            case = "q*sigma<2n+1"
            Z = Y + (-2 * n + qs - 1) / q
            c["Y+(q*sigma-2n-1)/q>=0"] = _constraint(Z, 0, Z >= -tol)
        else:
            case = "q*sigma>2n+1"
            c["Y>=0"] = _constraint(Y, 0, Y >= -tol)
    failed = [k for k, v in c.items() if not v["passed"]]
    return dict(verdict=not failed, constraints=c, binding=failed, case=case,
                pair="v_alpha,u_rho" if sigma is None else "v_alpha,u_sigma_rho")


def homogeneity_necessary(alpha_deg, beta_deg, pq, n, tol=1e-12):
    """1/p + 1/q = 1 - (alpha + beta)/Q for dilation-homogeneous weights."""
    pq = _pair(pq)
    Qd = 2 * n + 2
    lhs = 1 / pq.p + 1 / pq.q
    rhs = 1 - (alpha_deg + beta_deg) / Qd
    exact = None
    if all(isinstance(x, (int, Fraction)) for x in (alpha_deg, beta_deg)) and \
            all(float(x).is_integer() or isinstance(x, Fraction) for x in (pq.p, pq.q)):
        exact = Fraction(1) / Fraction(pq.p) + Fraction(1) / Fraction(pq.q) == 1 - Fraction(alpha_deg + beta_deg, Qd)
    ok = abs(lhs - rhs) <= tol if exact is None else exact
    return dict(verdict=bool(ok), lhs=float(lhs), rhs=float(rhs), Q=Qd)


# ---------------------------------------------- radial necessary condition


@dataclass
class NecessaryConditionReport:
    k: int
    n: int
    beta: float
    B: float
    supremum: float
    verdict: bool
    s: np.ndarray = field(repr=False, default=None)
    values: np.ndarray = field(repr=False, default=None)
    reason: str = ""


def beta_k(k, n):
    """beta_k = j_{n-1,1}^2 / (4 (k + n/2)); the k = 0 region uses beta = 1."""
    if k == 0:
        return 1.0
    j = bessel_first_zero(n - 1).value
    return j * j / (4.0 * (k + n / 2.0))


def B_k(k, n):
    b = beta_k(k, n)
    return float(laguerre_poly((k, n - 1), b) * math.exp(-b / 2))


def _graded_rule(upper, levels=30, nodes=8, ratio=0.5):
    br = upper * np.concatenate([[0.0], ratio ** np.arange(levels, 0, -1), np.linspace(ratio, 1.0, 3)[1:] if ratio < 1 else []])
    br = np.unique(np.concatenate([br, [upper]]))
    return gauss_panels(br, nodes)


def necessary_radial_sup(k, u, v, pq, s_grid=None, n=None):
    """sup_s I_k(s) J_k(s) with

    I_k(s) = (int_{|lam|<1/s} int_{|w|^2 < 2 beta s} u(k, lam, w)^q |lam|^{2n} dw dlam)^{1/q},
    J_k(s) = (int_{|z|^2 < 2 beta s} int_{|t|<s} v^{-p'} dz dt)^{1/p'}.
    """
    pq = _pair(pq)
    q, pc = pq.q, pq.pc
    n = n if n is not None else getattr(u, "n", None) or getattr(v, "n")
    beta = beta_k(k, n)
    Bk = B_k(k, n)
    s = default_s_grid(1e-3, 1e3, 121) if s_grid is None else np.asarray(s_grid, dtype=float)
    a, wa = _graded_rule(1.0)
    omega = sphere_area(n)
    vals = np.empty_like(s)
    for i, si in enumerate(s):
        L = 1.0 / si
        W = math.sqrt(2 * beta * si)
        lam = L * a
        wl = L * wa
        w = W * a
        ww = W * wa
        U = np.asarray(u.value(k, lam[:, None], w[None, :]), dtype=float)
        I = 2.0 * np.sum((wl * lam ** (2 * n))[:, None] * (ww * omega * w ** (2 * n - 1))[None, :] * U ** q)
        r = W * a
        wr = W * wa
        t = si * a
        wt = si * wa
        V = np.asarray(v.profile(r[:, None], t[None, :]), dtype=float)
        J = 2.0 * np.sum((wr * omega * r ** (2 * n - 1))[:, None] * wt[None, :] * V ** (-pc))
        vals[i] = I ** (1 / q) * J ** (1 / pc)
    res = supremum_with_trend(s, vals)
    return NecessaryConditionReport(k, n, beta, Bk, res.supremum, res.verdict, s, vals, res.reason)


# ------------------------------------------------------ empirical checks


def _weighted_space_norm(f, v, p, grid):
    vp = (lambda r, t: 1.0) if v is None else v.profile
    return integrate_hn_radial(lambda r, t: np.abs(f.profile(r, t) * vp(r, t)) ** p, f.n, grid) ** (1 / p)


def pitt_ratio(f, u, v, pq, refine=1, table=None):
    pq = _pair(pq)
    if table is None:
        table = SpectralTable.build(f, refine=refine) if u is None else graded_table(f, refine)
    q = pq.q
    weight = None if u is None else (lambda k, lam, w: np.asarray(u.value(k, lam, w)) ** q)
    lhs = fan_power_integral(table, q, weight) ** (1 / q)
    rhs = _weighted_space_norm(f, v, pq.p, table.grid)
    return lhs / rhs


def gaussian_family(n=1, values=(0.5, 1.0, 2.0)):
    return [Gaussian(a, b, n) for a in values for b in values]


def pitt_empirical(family, u, v, pq, refine=1):
    """max over the family of ||u f~||_q / ||v f||_p."""
    ratios = [pitt_ratio(f, u, v, pq, refine) for f in family if f.l1_norm() != 0]
    best = max(ratios) if ratios else 0.0
    return dict(constant=float(best), ratios=ratios, finite=bool(np.isfinite(best)))


def uncertainty_identity(f, table=None):
    """Returns (||f||_2^2, 2 Re <-i lam f~, (t f)~>, 2 Re <+i lam f~, (t f)~>)."""
    table = table if table is not None else SpectralTable.build(f)
    g = table.grid
    tf = f.times_t()
    tt = SpectralTable.build(tf, grid=g, k_max=table.k_max, adaptive=False)
    n = f.n
    pair = table.R * np.conj(tt.R) * np.exp(-table.log_c)[:, None]
    w = table.wlam * np.abs(table.lam) ** n * (2 * math.pi) ** (-n - 1)
    minus = 2 * float(np.real(np.sum(w * np.sum(-1j * table.lam[None, :] * pair, axis=0))))
    plus = 2 * float(np.real(np.sum(w * np.sum(1j * table.lam[None, :] * pair, axis=0))))
    return space_l2_sq(f, g), minus, plus


def uncertainty_check(f, u=None, v=None, pq=(2, 2), C=None, table=None):
    """RHS - LHS of ||f||_2^2 <= C ||lam u^{-1} f~||_{q'} ||t v f||_p.

    The constant is 2 C_pitt: the identity ||f||^2 = 2 Re <-i lam f~, (tf)~>,
    Holder, and Pitt applied to t f. With u = v = 1, p = q = 2, C_pitt = 1.
    """
    pq = _pair(pq)
    table = table if table is not None else SpectralTable.build(f)
    if C is None:
        if u is None and v is None and pq.p == 2 and pq.q == 2:
            C = 2.0
        else:
            C = 2.0 * pitt_empirical([f], u, v, pq)["constant"]
    qc = pq.qc
    lam_abs = np.abs(table.lam)

    def weight(k, lam, w):
        uu = 1.0 if u is None else np.asarray(u.value(k, lam, w), dtype=float)
        return (np.abs(lam) / uu) ** qc

    if u is None and qc == 2:
        A = math.sqrt(table.fan_l2_sq(lambda k, lam: lam ** 2))
    else:
        A = fan_power_integral(table, qc, weight) ** (1 / qc)
    B = _weighted_space_norm(f.times_t(), v, pq.p, table.grid)
    norm2, minus, plus = uncertainty_identity(f, table)
    rhs = C * A * B
    return VerificationReport("uncertainty", norm2, rhs, C, rhs - norm2, rhs - norm2 >= -1e-6 * norm2,
                              dict(identity_minus_i_lambda=minus, identity_plus_i_lambda=plus,
                                   identity_rel_err=abs(minus - norm2) / norm2,
                                   lam_norm=A, t_norm=B))
