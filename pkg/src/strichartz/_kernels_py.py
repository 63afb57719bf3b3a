"""Numpy reference versions of the compiled kernels.

Both kernels produce psi_k(x) = L^alpha_k(x) exp(-x/2). The recurrence runs
on unscaled polynomials with a running exponent: whenever the values exceed
2^64 they are renormalized and the factor is folded into the exponential.
The output is the product of the two, which underflows to 0 only when
|psi_k| < 2^64 * 1e-308.
"""
import numpy as np

_BIG = 2.0 ** 64
_LOG_BIG = float(np.log(_BIG))


def _rows(x, alpha, kmax):
    # generator over k of psi_k(x)
    p0 = np.ones_like(x)
    ls = -0.5 * x
    fac = np.exp(ls)
    yield p0 * fac
    if kmax == 0:
        return
    p1 = 1.0 + alpha - x
    yield p1 * fac
    for k in range(1, kmax):
        p0, p1 = p1, ((2 * k + 1 + alpha - x) * p1 - (k + alpha) * p0) / (k + 1)
        big = np.abs(p1) > _BIG
        if big.any():
            p0 = np.where(big, p0 / _BIG, p0)
            p1 = np.where(big, p1 / _BIG, p1)
            ls = np.where(big, ls + _LOG_BIG, ls)
            fac = np.exp(ls)
        yield p1 * fac


def laguerre_table(x, alpha, kmax):
    """Rows k = 0..kmax of L^alpha_k(x) exp(-x/2)."""
    x = np.ascontiguousarray(x, dtype=float)
    out = np.empty((kmax + 1, x.size))
    for k, row in enumerate(_rows(x, float(alpha), kmax)):
        out[k] = row
    return out


def laguerre_projections(mu, r2, g, alpha, kmax):
    """out[m, k] = sum_j g[m, j] psi_k(mu[m] * r2[j] / 2)."""
    mu = np.asarray(mu, dtype=float)
    r2 = np.asarray(r2, dtype=float)
    g = np.asarray(g, dtype=float)
    x = 0.5 * mu[:, None] * r2[None, :]
    out = np.empty((mu.size, kmax + 1))
    for k, row in enumerate(_rows(x, float(alpha), kmax)):
        out[:, k] = (g * row).sum(axis=1)
    return out
