# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Laguerre recurrences (same contract as _kernels_py)."""
import numpy as np
cimport numpy as cnp
from libc.math cimport exp, fabs, log

cnp.import_array()

cdef double BIG = 18446744073709551616.0  # 2**64
cdef double LOG_BIG = log(BIG)


def laguerre_table(x, double alpha, Py_ssize_t kmax):
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0]
    out_arr = np.empty((kmax + 1, n))
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t j, k
    cdef double xx, p0, p1, p2, ls, fac
    for j in range(n):
        xx = xv[j]
        ls = -0.5 * xx
        fac = exp(ls)
        p0 = 1.0
        out[0, j] = fac
        if kmax == 0:
            continue
        p1 = 1.0 + alpha - xx
        out[1, j] = p1 * fac
        for k in range(1, kmax):
            p2 = ((2 * k + 1 + alpha - xx) * p1 - (k + alpha) * p0) / (k + 1)
            p0 = p1
            p1 = p2
            if fabs(p1) > BIG:
                p0 /= BIG
                p1 /= BIG
                ls += LOG_BIG
                fac = exp(ls)
            out[k + 1, j] = p1 * fac
    return out_arr


def laguerre_projections(mu, r2, g, double alpha, Py_ssize_t kmax):
    cdef double[::1] muv = np.ascontiguousarray(mu, dtype=np.float64)
    cdef double[::1] r2v = np.ascontiguousarray(r2, dtype=np.float64)
    cdef double[:, ::1] gv = np.ascontiguousarray(g, dtype=np.float64)
    cdef Py_ssize_t m_count = muv.shape[0]
    cdef Py_ssize_t n = r2v.shape[0]
    out_arr = np.zeros((m_count, kmax + 1))
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t m, j, k
    cdef double xx, w, p0, p1, p2, ls, fac
    for m in range(m_count):
        for j in range(n):
            w = gv[m, j]
            if w == 0.0:
                continue
            xx = 0.5 * muv[m] * r2v[j]
            ls = -0.5 * xx
            fac = exp(ls)
            p0 = 1.0
            out[m, 0] += w * fac
            if kmax == 0:
                continue
            p1 = 1.0 + alpha - xx
            out[m, 1] += w * p1 * fac
            for k in range(1, kmax):
                p2 = ((2 * k + 1 + alpha - xx) * p1 - (k + alpha) * p0) / (k + 1)
                p0 = p1
                p1 = p2
                if fabs(p1) > BIG:
                    p0 /= BIG
                    p1 /= BIG
                    ls += LOG_BIG
                    fac = exp(ls)
                out[m, k + 1] += w * p1 * fac
    return out_arr
