"""Fractional and conformal powers of the sublaplacian on the fan.

Quadratic forms <A f, f> are computed through the transform only:

    <A f, f> = int m_A(k, lam) |f~(a, w)|^2 dnu_2(a) dw,

with the w-integral in closed form. The Hardy and Pitt inequalities below
compare these forms with weighted L^2 norms on H^n.
"""
import math
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate

from .geometry import QuadratureGrid, homnorm_rt, integrate_hn_radial, sphere_area
from .report import VerificationReport
from .specfn import DomainError, log_gamma
from .transform import SpectralTable

VARIANTS = ("FractionalL", "ConformalPlus", "ConformalMinus", "FractionalLInverse")


@dataclass(frozen=True)
class MultiplierKind:
    variant: str
    s: float
    n: int

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown multiplier variant {self.variant!r}")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not (0 <= self.s < self.n + 1):
            raise DomainError(f"{self.variant} needs 0 <= s < n+1, got s={self.s}")

    def __call__(self, k, lam):
        return multiplier_value(self, k, lam)


def FractionalL(s, n):
    return MultiplierKind("FractionalL", s, n)


def ConformalPlus(s, n):
    return MultiplierKind("ConformalPlus", s, n)


def ConformalMinus(s, n):
    return MultiplierKind("ConformalMinus", s, n)


def FractionalLInverse(s, n):
    """((2k+n)|lam|)^{-s}, the symbol of L^{-s}."""
    return MultiplierKind("FractionalLInverse", s, n)


def _log_gamma_ratio(k, n, s):
    # log Gamma((2k+n+1+s)/2) - log Gamma((2k+n+1-s)/2); both arguments > 0 for s < n+1
    k = np.asarray(k, dtype=float)
    return log_gamma((2 * k + n + 1 + s) / 2) - log_gamma((2 * k + n + 1 - s) / 2)


def multiplier_value(kind, k, lam):
    """Symbol of the operator on the ray k at lambda (broadcasts)."""
    lam = np.asarray(lam, dtype=float)
    if np.any(lam == 0):
        raise DomainError("multipliers are evaluated at lambda != 0")
    k = np.asarray(k)
    if np.any(k < 0):
        raise DomainError("k must be >= 0")
    n, s = kind.n, kind.s
    mu = np.abs(lam)
    if kind.variant == "FractionalL":
        out = ((2 * k + n) * mu) ** s
    elif kind.variant == "FractionalLInverse":
        out = ((2 * k + n) * mu) ** (-s)
    elif kind.variant == "ConformalPlus":
        out = np.exp(s * np.log(2 * mu) + _log_gamma_ratio(k, n, s))
    else:
        out = np.exp(-s * np.log(2 * mu) - _log_gamma_ratio(k, n, s))
    return out if np.ndim(out) else float(out)


def quadratic_form(f, kind, table=None):
    """int m(k, lam) |f~|^2 dnu_2 dw from the Laguerre coefficients of f."""
    if f.l2_norm_sq() == 0:
        return 0.0
    table = table if table is not None else SpectralTable.build(f)
    return table.fan_l2_sq(lambda k, lam: multiplier_value(kind, k, lam))


# -------------------------------------------------------------- constants


def _lg(x, what):
    if not x > 0:
        raise DomainError(f"{what}: Gamma argument {x:g} is not positive")
    return log_gamma(x)


def log_d_ns(n, s):
    return ((2 * n - 2) * math.log(2) + _lg((n - 1 - s) / 2, "d_ns") + _lg(n, "d_ns")
            + _lg(n - s, "d_ns") - _lg(s, "d_ns") - 0.5 * math.log(math.pi))


def log_c_ns(n, s):
    return (math.log(4) - (n + 0.5) * math.log(math.pi) + _lg(n + s, "c_ns") + _lg((n + 1 + s) / 2, "c_ns")
            - _lg(s, "c_ns") - _lg((n + s) / 2, "c_ns"))


def log_b_ns(n, s):
    return ((n + 0.5) * math.log(math.pi) - math.log(4) + _lg((n - s) / 2, "b_ns") - _lg(n - s, "b_ns")
            + _lg((n - 1 - s) / 2, "b_ns") - _lg((n - 1 + s) / 2, "b_ns") + _lg(s, "b_ns")
            - _lg((n + 1 + s) / 2, "b_ns"))


def log_gratio(n, s):
    """log Gamma((n+1+s)/2) / Gamma((n+1-s)/2)."""
    return _lg((n + 1 + s) / 2, "Gamma ratio") - _lg((n + 1 - s) / 2, "Gamma ratio")


def C2_ns(n, s):
    return math.exp(2 * s * math.log(4) + 2 * log_gratio(n, s))


def us_norm(n, s, kmax=200000):
    """sup_k ((2k+n)/2)^{-s} Gamma((2k+n+1+s)/2) / Gamma((2k+n+1-s)/2).

    The sequence tends to 1 as k -> inf, so the limit is part of the sup.
    """
    if s == 0:
        return 1.0
    k = np.arange(kmax + 1, dtype=float)
    v = np.exp(-s * np.log((2 * k + n) / 2) + _log_gamma_ratio(k, n, s))
    return float(max(v.max(), 1.0))


def sharp_bounds(n, s):
    g2 = math.exp(s * math.log(4) + 2 * log_gratio(n, s))
    return g2 * (n - 1 - s) / (n - 1 + s), g2 * (n - s) / n


def duplication_residual(z):
    """log Gamma(z) + log Gamma(z+1/2) - log(2^{1-2z} sqrt(pi) Gamma(2z))."""
    return log_gamma(z) + log_gamma(z + 0.5) - ((1 - 2 * z) * math.log(2) + 0.5 * math.log(math.pi) + log_gamma(2 * z))


@dataclass(frozen=True)
class ConstantsBundle:
    n: int
    s: float
    d_ns: float
    c_ns: float
    b_ns: float
    C2_ns: float
    Us_norm: float
    sharp_lower: float
    sharp_upper: float
    bc_product: float
    bc_expected: float

    def to_dict(self):
        return asdict(self)


@lru_cache(maxsize=256)
def constants(n, s):
    """Closed-form constants for 0 < s < 1 and n - 1 - s > 0."""
    if not (0 < s < 1):
        raise DomainError(f"constants need 0 < s < 1, got {s}")
    if not n - 1 - s > 0:
        raise DomainError(f"constants need n - 1 - s > 0, got n={n}, s={s}")
    lb, lc = log_b_ns(n, s), log_c_ns(n, s)
    lo, hi = sharp_bounds(n, s)
    return ConstantsBundle(n, s, math.exp(log_d_ns(n, s)), math.exp(lc), math.exp(lb), C2_ns(n, s),
                           us_norm(n, s), lo, hi, math.exp(lb + lc),
                           4 ** s * (n - 1 + s) / (n - 1 - s))


def constants_table(ns, ss):
    """JSON-ready table keyed by 'n,s'."""
    out = {}
    for n in ns:
        for s in ss:
            try:
                out[f"{n},{s:g}"] = constants(n, s).to_dict()
            except DomainError as e:
                out[f"{n},{s:g}"] = {"error": str(e)}
    return out


# ---------------------------------------------------------- integral checks


def beta_integral(a, b):
    """int_0^inf (1+t)^{-b} t^{a-1} dt by quadrature, split at t = 1.

    On (1, inf) the substitution t = 1/u gives int_0^1 u^{b-a-1} (1+u)^{-b} du;
    both pieces use algebraic endpoint weights.
    """
    if not a > 0:
        raise DomainError("beta integral needs a > 0")
    if not b > a:
        return math.inf
    g = lambda u: (1 + u) ** (-b)
    lo, _ = integrate.quad(g, 0, 1, weight="alg", wvar=(a - 1, 0), epsabs=0, epsrel=1e-13)
    hi, _ = integrate.quad(g, 0, 1, weight="alg", wvar=(b - a - 1, 0), epsabs=0, epsrel=1e-13)
    return lo + hi


def beta_integral_check(a, b):
    """Relative error of the quadrature against Gamma(a) Gamma(b-a) / Gamma(b)."""
    q = beta_integral(a, b)
    if math.isinf(q):
        return dict(divergent=True, quadrature=q, closed=math.inf, rel_err=math.nan)
    closed = math.exp(log_gamma(a) + log_gamma(b - a) - log_gamma(b))
    return dict(divergent=False, quadrature=q, closed=closed, rel_err=abs(q - closed) / closed)


def t_power_integral(nu):
    """int_R (1+t^2)^{-nu} dt by quadrature on the whole line."""
    v, _ = integrate.quad(lambda t: (1 + t * t) ** (-nu), -np.inf, np.inf, epsabs=0, epsrel=1e-13)
    return v


def rayleigh_ratio(n, s, rho=1.0):
    """rho^{2s} int phi^2_{-(n+1)} / int phi^2_{-(n+1-s)} |z|^{-2s} on H^n, by quadrature.

    With P(r, t) = (rho^2 + r^2)^2 + 16 t^2 the integrands are P^{-(n+1)} and
    P^{-(n+1-s)} r^{-2s}. The t-integral is done first on (0, inf).
    """
    omega = sphere_area(n)

    def inner(r, m):
        # int_R (A + 16 t^2)^{-m} dt in units t = c u with c = sqrt(A)/4,
        # returned as (value without c A^{-m}, log(c A^{-m}))
        A = (rho * rho + r * r) ** 2
        g = lambda u: (1 + u * u) ** (-m)
        a, _ = integrate.quad(g, 0, 1, epsabs=0, epsrel=1e-13)
        b, _ = integrate.quad(g, 1, np.inf, epsabs=0, epsrel=1e-13)
        return 2 * (a + b), math.log(math.sqrt(A) / 4) - m * math.log(A)

    def radial(m, power):
        def g(r):
            v, la = inner(r, m)
            return v * math.exp(la + (2 * n - 1 + power) * math.log(r)) * omega if r > 0 else 0.0
        a, _ = integrate.quad(g, 0, rho, epsabs=0, epsrel=1e-12, limit=200)
        b, _ = integrate.quad(g, rho, np.inf, epsabs=1e-14 * a, epsrel=1e-12, limit=200)
        return a + b

    return rho ** (2 * s) * radial(n + 1, 0.0) / radial(n + 1 - s, -2 * s)


def rayleigh_upper_bound_check(n, s, rho=1.0):
    """Rayleigh quotient C2 * ratio against the closed form C2 4^{-s} (n-s)/n."""
    if not 0 < s < 1:
        raise DomainError("rayleigh check needs 0 < s < 1")
    quotient = C2_ns(n, s) * rayleigh_ratio(n, s, rho)
    closed = C2_ns(n, s) * 4 ** (-s) * (n - s) / n
    return dict(quotient=quotient, closed=closed, rel_err=abs(quotient - closed) / closed, rho=rho)


# ---------------------------------------------------- Hardy and Pitt checks


def weighted_l2(f, weight, grid=None, panels=48, levels=16):
    """int weight(r, t) |f|^2 dz dt on a grid graded toward r = 0 and t = 0."""
    if grid is None:
        rb = f.r_breaks()
        tb = f.t_breaks()
        tmax = float(max(abs(tb[0]), abs(tb[-1])))
        grid = QuadratureGrid.build(float(rb[-1]), tmax, 1.0, r_panels=panels, t_panels=panels,
                                    n_lambda=2, k_max=0, levels=levels)
    return integrate_hn_radial(lambda r, t: weight(r, t) * np.abs(f.profile(r, t)) ** 2, f.n, grid)


def _z_power(s):
    return lambda r, t: np.asarray(r, dtype=float) ** (2 * s) * np.ones_like(t)


def _hom_power(s):
    return lambda r, t: homnorm_rt(r, t) ** (2 * s)


def _nonhom(s, delta):
    # v(z,t)^2 = ((delta + |z|^2/4)^2 + t^2)^s
    return lambda r, t: ((delta + 0.25 * np.asarray(r) ** 2) ** 2 + np.asarray(t) ** 2) ** s


def _nonhom_const(n, s, delta):
    # (4 delta)^s Gamma((1+n+s)/2)^2 / Gamma((1+n-s)/2)^2
    return math.exp(s * math.log(4 * delta) + 2 * log_gratio(n, s))


def hom_const(n, s):
    """2^{2n+3s} Gamma((n+s)/2)^2 / (Gamma(1-s) Gamma(n/2)^2)."""
    if not 0 < s < 1:
        raise DomainError("homogeneous Hardy constant needs 0 < s < 1")
    return math.exp((2 * n + 3 * s) * math.log(2) + 2 * log_gamma((n + s) / 2) - log_gamma(1 - s)
                    - 2 * log_gamma(n / 2))


def pitt_z_const(n, s):
    """d_{n,s} pi^{2s} (Gamma((n-2s)/4) / Gamma((n+2s)/4))^2."""
    return math.exp(log_d_ns(n, s) + 2 * s * math.log(math.pi)
                    + 2 * (_lg((n - 2 * s) / 4, "Pitt |z|") - _lg((n + 2 * s) / 4, "Pitt |z|")))


def pitt_zt_const(s):
    """2^{-s} pi^s (Gamma((1-s)/4) / Gamma((1+s)/4))^2."""
    return math.exp(-s * math.log(2) + s * math.log(math.pi)
                    + 2 * (_lg((1 - s) / 4, "Pitt |(z,t)|") - _lg((1 + s) / 4, "Pitt |(z,t)|")))


def pitt_trace_const(n, s):
    """4^{-s} (n-1+s)/(n-1-s) (Gamma((n+1-s)/2) / Gamma((n+1+s)/2))^2, the reciprocal of sharp_lower."""
    return 1.0 / sharp_bounds(n, s)[0]


HARDY_VARIANTS = ("z_dual", "trace", "zt", "nonhom", "nonhom_L", "hom")
PITT_VARIANTS = ("z", "zt", "trace", "trace_2pi", "nonhom_a_inv", "nonhom_a", "nonhom_b",
                 "hom", "hom_2pi")


def _check_range(variant, n, s):
    if variant in ("z", "z_dual", "trace", "trace_2pi", "hom", "hom_2pi"):
        if not 0 < s < 1:
            raise DomainError(f"{variant}: needs 0 < s < 1")
    if variant in ("z", "z_dual", "trace", "trace_2pi") and not n - 1 - s > 0:
        raise DomainError(f"{variant}: needs n - 1 - s > 0")
    if variant in ("zt",) and not 0 < s < 1:
        # Gamma((1-s)/4) has its pole at s = 1
        raise DomainError("zt: the constant needs 0 < s < 1")
    if variant in ("nonhom", "nonhom_L", "nonhom_a_inv", "nonhom_a", "nonhom_b") and not 0 < s < (n + 1) / 2:
        raise DomainError(f"{variant}: needs 0 < s < (n+1)/2")


def verify_hardy(f, s, variant="trace", delta=1.0, Vs=None, table=None):
    """Margin <A f, f> - C int w |f|^2 of a Hardy inequality.

    z_dual   : A = L_s, w = |z|^{-2s}, C = hardy_z_const
    trace    : A = L_s, w = |z|^{-2s}, C = sharp_lower
    zt       : A = L_s, w = N^{-2s},   C = 1 / pitt_zt_const
    nonhom   : A = L_s, w = ((delta+|z|^2/4)^2+t^2)^{-s}, C = (4 delta)^s Gamma ratio^2
    nonhom_L : same weight, A = ||U_s|| L^s
    hom      : A = ||V_s|| L^s, w = N^{-2s}, C = hom_const; ||V_s|| from the caller.
               Without it the margin is not defined and the report gives the
               smallest ||V_s|| the data allow.
    """
    n = f.n
    _check_range(variant, n, s)
    table = table if table is not None else SpectralTable.build(f)
    meta = dict(variant=variant, s=s, n=n)
    if variant in ("z_dual", "trace", "zt", "nonhom"):
        form = quadratic_form(f, ConformalPlus(s, n), table)
    else:
        form = quadratic_form(f, FractionalL(s, n), table)
    if variant == "z_dual":
        C, w = hardy_z_const(n, s), _z_power(-s)
    elif variant == "trace":
        C, w = sharp_bounds(n, s)[0], _z_power(-s)
    elif variant == "zt":
        C, w = 1.0 / pitt_zt_const(s), _hom_power(-s)
    elif variant == "nonhom":
        C, w = _nonhom_const(n, s, delta), _nonhom(-s, delta)
    elif variant == "nonhom_L":
        C, w = _nonhom_const(n, s, delta), _nonhom(-s, delta)
        form = us_norm(n, s) * form
    elif variant == "hom":
        C, w = hom_const(n, s), _hom_power(-s)
    else:
        raise ValueError(f"unknown Hardy variant {variant!r}")
    rhs = weighted_l2(f, w)
    if variant == "hom":
        implied = C * rhs / form
        meta["Vs_lower_bound"] = implied
        if Vs is None:
            return VerificationReport("hardy", C * rhs, float("nan"), C, float("nan"), False, meta)
        form = Vs * form
    margin = form - C * rhs
    return VerificationReport("hardy", C * rhs, form, C, margin, margin >= -1e-6 * max(form, 1e-300), meta)


def verify_pitt_dual(f, s, variant="z", delta=1.0, Vs=None, table=None):
    """Margin C int w |f|^2 - <A f, f> of a Pitt inequality.

    z               : A = L_{-s}, w = |z|^{2s}, C = pitt_z_const
    zt              : A = L_{-s}, w = N^{2s},   C = pitt_zt_const
    trace           : A = L_{-s}, w = |z|^{2s}, C = 1/sharp_lower
    trace_2pi       : as trace with an extra factor (2 pi)^{-1} in C
    nonhom_a_inv    : A = L_{-s}, w = v^{-2}, C = 1/nonhom constant
    nonhom_a        : A = L_{-s}, w = v^2,    C = 1/nonhom constant (the dual of the Hardy bound)
    nonhom_b        : A = L^{-s}, w = v^2,    C = ||U_s|| / nonhom constant
    hom, hom_2pi    : A = L^{-s}, w = N^{2s}, C = ||V_s|| / hom_const, times (2 pi)^{-n} for hom_2pi
    """
    n = f.n
    _check_range(variant, n, s)
    table = table if table is not None else SpectralTable.build(f)
    meta = dict(variant=variant, s=s, n=n)
    if variant in ("nonhom_b", "hom", "hom_2pi"):
        form = quadratic_form(f, FractionalLInverse(s, n), table)
    else:
        form = quadratic_form(f, ConformalMinus(s, n), table)
    if variant == "z":
        C, w = pitt_z_const(n, s), _z_power(s)
    elif variant == "zt":
        C, w = pitt_zt_const(s), _hom_power(s)
    elif variant == "trace":
        C, w = pitt_trace_const(n, s), _z_power(s)
    elif variant == "trace_2pi":
        C, w = pitt_trace_const(n, s) / (2 * math.pi), _z_power(s)
    elif variant == "nonhom_a_inv":
        C, w = 1.0 / _nonhom_const(n, s, delta), _nonhom(-s, delta)
    elif variant == "nonhom_a":
        C, w = 1.0 / _nonhom_const(n, s, delta), _nonhom(s, delta)
    elif variant == "nonhom_b":
        C, w = us_norm(n, s) / _nonhom_const(n, s, delta), _nonhom(s, delta)
    elif variant in ("hom", "hom_2pi"):
        C, w = 1.0 / hom_const(n, s), _hom_power(s)
        if variant == "hom_2pi":
            C *= (2 * math.pi) ** (-n)
    else:
        raise ValueError(f"unknown Pitt variant {variant!r}")
    weighted = weighted_l2(f, w)
    if variant in ("hom", "hom_2pi"):
        meta["Vs_lower_bound"] = form / (C * weighted)
        if Vs is None:
            return VerificationReport("pitt_dual", form, float("nan"), C, float("nan"), False, meta)
        C = C * Vs
    rhs = C * weighted
    margin = rhs - form
    return VerificationReport("pitt_dual", form, rhs, C, margin, margin >= -1e-6 * max(form, 1e-300), meta)


def hardy_z_const(n, s):
    """d_{n,s}^{-1} pi^{-2s} (Gamma((n+2s)/4) / Gamma((n-2s)/4))^2, evaluated directly."""
    d = 2.0 ** (2 * n - 2) * math.gamma((n - 1 - s) / 2) * math.gamma(n) * math.gamma(n - s) \
        / (math.gamma(s) * math.sqrt(math.pi))
    return math.pi ** (-2 * s) * (math.gamma((n + 2 * s) / 4) / math.gamma((n - 2 * s) / 4)) ** 2 / d


def hardy_pitt_reciprocity(n, s):
    """pitt_z_const * hardy_z_const, which should be 1."""
    return pitt_z_const(n, s) * hardy_z_const(n, s)
