"""Special functions: Laguerre, Bessel J, log-Gamma, Macdonald K."""
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special


class DomainError(ValueError):
    pass


_BIG = 2.0 ** 64
_LOG_BIG = math.log(_BIG)


@dataclass(frozen=True)
class LaguerreIndex:
    k: int
    delta: float

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 0:
            raise DomainError(f"Laguerre degree must be a nonnegative integer, got {self.k}")
        if not self.delta > -1:
            raise DomainError(f"Laguerre type must exceed -1, got {self.delta}")


@dataclass(frozen=True)
class BesselZero:
    nu: float
    s: int
    value: float


# ---------------------------------------------------------------- Laguerre


def laguerre_poly(idx, x):
    """L^delta_k(x) by forward recurrence in k.

    `idx` is a LaguerreIndex or a (k, delta) pair. Works elementwise on arrays.
    """
    if not isinstance(idx, LaguerreIndex):
        idx = LaguerreIndex(*idx)
    k, a = idx.k, float(idx.delta)
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError("non-finite argument")
    p0 = np.ones_like(x)
    if k == 0:
        return p0 if p0.ndim else float(p0)
    p1 = 1.0 + a - x
    for j in range(1, k):
        p0, p1 = p1, ((2 * j + 1 + a - x) * p1 - (j + a) * p0) / (j + 1)
    return p1 if p1.ndim else float(p1)


def laguerre_scaled(k, delta, x):
    """L^delta_k(x) exp(-x/2) without overflow for large x."""
    x = np.asarray(x, dtype=float)
    ls = -0.5 * x
    if k == 0:
        return np.exp(ls)
    p0 = np.ones_like(x)
    p1 = 1.0 + delta - x
    for j in range(1, k):
        p0, p1 = p1, ((2 * j + 1 + delta - x) * p1 - (j + delta) * p0) / (j + 1)
        big = np.abs(p1) > _BIG
        if big.any():
            # renormalize; the factor moves into the exponent
            p0 = np.where(big, p0 / _BIG, p0)
            p1 = np.where(big, p1 / _BIG, p1)
            ls = np.where(big, ls + _LOG_BIG, ls)
    return p1 * np.exp(ls)


def laguerre_fn(k, n, lam, r):
    """phi^{n-1}_{k,lam} at |z| = r: L^{n-1}_k(|lam| r^2/2) exp(-|lam| r^2/4)."""
    if lam == 0:
        raise DomainError("the Laguerre function needs lambda != 0")
    if n < 1:
        raise DomainError("n must be >= 1")
    x = 0.5 * abs(lam) * np.asarray(r, dtype=float) ** 2
    out = laguerre_scaled(k, n - 1, x)
    return out if out.ndim else float(out)


def log_cnk(n, k):
    """log c_{n,k} = log(k!(n-1)!/(k+n-1)!)."""
    k = np.asarray(k, dtype=float)
    out = special.gammaln(k + 1) + math.lgamma(n) - special.gammaln(k + n)
    return out if out.ndim else float(out)


def cnk(n, k):
    out = np.exp(log_cnk(n, k))
    return out if np.ndim(out) else float(out)


def binom_kn(n, k):
    """binom(k+n-1, k) = 1/c_{n,k}."""
    out = np.exp(-np.asarray(log_cnk(n, k)))
    return out if np.ndim(out) else float(out)


def _bisect(fn, lo, hi, flo, tol):
    # plain bisection; stops on relative width
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = fn(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
        if hi - lo <= tol * max(abs(mid), 1e-300):
            break
    return 0.5 * (lo + hi)


def laguerre_first_zero(k, n):
    """Smallest positive zero of L^{n-1}_k."""
    if k < 1:
        raise DomainError("L_0 has no zeros; need k >= 1")
    a = n - 1
    step = min(0.1, 1.0 / (8.0 * (k + n / 2.0)))
    x0 = 0.0
    f0 = laguerre_poly((k, a), 0.0)
    while True:
        xs = x0 + step * np.arange(1, 257)
        vals = laguerre_poly((k, a), xs)
        sign = np.nonzero(np.sign(vals) != np.sign(f0))[0]
        if sign.size:
            i = sign[0]
            lo = xs[i - 1] if i else x0
            hi = xs[i]
            flo = vals[i - 1] if i else f0
            break
        x0, f0 = xs[-1], vals[-1]

    def fn(x):
        return laguerre_poly((k, a), x)

    x = _bisect(fn, lo, hi, flo, 1e-13)
    # one Newton step with L' = -L^{a+1}_{k-1}
    d = -laguerre_poly((k - 1, a + 1), x)
    if d != 0:
        xn = x - fn(x) / d
        if lo <= xn <= hi:
            x = xn
    return float(x)


# ------------------------------------------------------------------- Bessel


def _bessel_series(nu, x):
    # sum_m (-1)^m (x/2)^{2m+nu} / (m! Gamma(m+nu+1))
    if x == 0:
        return 1.0 if nu == 0 else 0.0
    h = 0.5 * x
    term = math.exp(nu * math.log(h) - math.lgamma(nu + 1))
    total = term
    h2 = h * h
    m = 0
    while True:
        m += 1
        term *= -h2 / (m * (m + nu))
        total += term
        if abs(term) <= 1e-17 * abs(total) and m > h:
            break
        if m > 500:
            break
    return total


def _bessel_miller(nu, x):
    # backward recurrence from far above the turning point, normalized by
    # (x/2)^mu = sum_k (mu+2k) Gamma(mu+k)/k! J_{mu+2k}(x), mu = frac(nu)
    m = int(math.floor(nu))
    mu = nu - m
    top = max(m, int(x)) + 30 + int(3 * math.sqrt(x + 1.0)) + 10
    top += top % 2
    vals = np.zeros(top + 2)
    vals[top] = 1e-280
    for j in range(top, 0, -1):
        vals[j - 1] = 2.0 * (mu + j) / x * vals[j] - vals[j + 1]
        if abs(vals[j - 1]) > 1e250:
            vals[j - 1:] *= 1e-250
    if mu == 0.0:
        norm = vals[0] + 2.0 * vals[2:top + 1:2].sum()
        scale = 1.0 / norm
    else:
        # coefficient (mu+2k) Gamma(mu+k)/k!, accumulated in log space
        norm = 0.0
        for kk in range(0, top // 2 + 1):
            c = math.log(mu + 2 * kk) + math.lgamma(mu + kk) - math.lgamma(kk + 1)
            norm += math.exp(c) * vals[2 * kk]
        scale = math.exp(mu * math.log(0.5 * x)) / norm
    return vals[m] * scale


def _bessel_scalar(nu, x):
    if x < 0:
        raise DomainError("bessel_j needs x >= 0")
    if x <= 12.0 or x * x <= 4.0 * (nu + 1):
        return _bessel_series(nu, x)
    return _bessel_miller(nu, x)


def bessel_j(nu, x):
    """J_nu(x) for real nu >= 0 and x >= 0."""
    if nu < 0:
        raise DomainError("bessel_j needs nu >= 0")
    if np.ndim(x) == 0:
        return float(_bessel_scalar(float(nu), float(x)))
    xs = np.asarray(x, dtype=float)
    return np.array([_bessel_scalar(float(nu), v) for v in xs.ravel()]).reshape(xs.shape)


def bessel_ratio(nu, x):
    """J_nu(x)/x^nu, with the series limit 1/(2^nu Gamma(nu+1)) at x = 0."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    flat = x.ravel()
    res = out.ravel()
    for i, v in enumerate(flat):
        if v < 1e-3:
            h2 = 0.25 * v * v
            # two series terms are plenty below 1e-3
            res[i] = math.exp(-nu * math.log(2) - math.lgamma(nu + 1)) * (1 - h2 / (nu + 1) + h2 * h2 / (2 * (nu + 1) * (nu + 2)))
        else:
            res[i] = _bessel_scalar(nu, v) / v ** nu
    out = res.reshape(x.shape)
    return out if out.ndim else float(out)


def bessel_zero(nu, s=1):
    """s-th positive zero of J_nu by scan with step 0.1 and bisection."""
    if nu < 0 or s < 1:
        raise DomainError("need nu >= 0 and s >= 1")
    step = 0.1
    x = max(float(nu), step)
    fx = bessel_j(nu, x)
    found = 0
    while True:
        y = x + step
        fy = bessel_j(nu, y)
        if fx == 0.0:
            found += 1
            if found == s:
                return BesselZero(float(nu), s, x)
        elif fy != 0.0 and (fx > 0) != (fy > 0):
            found += 1
            if found == s:
                z = _bisect(lambda v: bessel_j(nu, v), x, y, fx, 1e-14)
                return BesselZero(float(nu), s, float(z))
        x, fx = y, fy


def bessel_first_zero(nu):
    return bessel_zero(nu, 1)


# -------------------------------------------------------------------- Gamma


def log_gamma(x):
    """log Gamma(x) for x > 0 (scalar or array)."""
    if np.ndim(x) == 0:
        if not x > 0:
            raise DomainError(f"log_gamma needs x > 0, got {x}")
        return math.lgamma(float(x))
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError("log_gamma needs x > 0")
    return special.gammaln(x)


def gamma_ratio(a, b):
    """Gamma(a)/Gamma(b) via log_gamma."""
    return np.exp(log_gamma(a) - log_gamma(b))


# ---------------------------------------------------------------- Macdonald


def macdonald_k(nu, y):
    """K_nu(y) = int_0^inf exp(-y cosh u) cosh(nu u) du."""
    if not y > 0:
        raise DomainError("macdonald_k needs y > 0")
    if not nu > 0:
        raise DomainError("macdonald_k needs nu > 0")

    # factor out exp(-y) so the integrand is O(1) near u = 0
    def f(u):
        return math.exp(-y * (math.cosh(u) - 1.0) + nu * u) * 0.5 * (1.0 + math.exp(-2 * nu * u))

    # the integrand is negligible once y (cosh u - 1) - nu u > 750
    upper = 1.0
    while y * (math.cosh(upper) - 1.0) - nu * upper < 750.0:
        upper *= 1.5
    val, _ = integrate.quad(f, 0.0, upper, epsabs=0.0, epsrel=1e-13, limit=400)
    return val * math.exp(-y)


def macdonald_k_basset(nu, y):
    """K_nu(y) from the cosine (Basset) integral.

    Gamma(nu+1/2) (2y)^nu / sqrt(pi) * int_0^inf cos(u) (u^2+y^2)^{-nu-1/2} du,
    valid for nu > -1/2. Accurate for moderate y only: the oscillatory
    integral cancels down to exp(-y).
    """
    if not y > 0:
        raise DomainError("macdonald_k_basset needs y > 0")
    pref = math.exp(math.lgamma(nu + 0.5) + nu * math.log(2 * y)) / math.sqrt(math.pi)
    val, _ = integrate.quad(lambda u: (u * u + y * y) ** (-nu - 0.5), 0.0, np.inf, weight="cos", wvar=1.0, limlst=200)
    return pref * val


def macdonald_bound(nu, y):
    """Gamma(nu) 2^{nu-1} y^{-nu}, an upper bound for K_nu(y) when nu > 0."""
    return math.exp(math.lgamma(nu) + (nu - 1) * math.log(2) - nu * math.log(y))
