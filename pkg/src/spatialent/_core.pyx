# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: Hermite-function recurrence and the direct chi sum."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, exp, fabs, log, M_PI

cnp.import_array()

cdef double _BIG = 1e150
cdef double _LOG_BIG = log(1e150)
cdef double _PI_QUARTER = M_PI ** -0.25


cdef double _value(int k, double x) noexcept nogil:
    cdef double scale = -0.5 * x * x
    cdef double prev = 0.0
    cdef double cur = _PI_QUARTER
    cdef double nxt
    cdef int j
    for j in range(k):
        nxt = x * sqrt(2.0 / (j + 1)) * cur - sqrt(<double>j / (j + 1)) * prev
        prev = cur
        cur = nxt
        if fabs(cur) > _BIG:
            cur /= _BIG
            prev /= _BIG
            scale += _LOG_BIG
    if cur == 0.0:
        return 0.0
    return cur * exp(scale)


def eigenfunction_value(int k, double x):
    """phi_k(x) for a single mode and a single point."""
    return _value(k, x)


def eigenfunction_row(int kmax, double x):
    """phi_0(x), ..., phi_kmax(x) at one point."""
    cdef cnp.ndarray[double, ndim=1] out = np.empty(kmax + 1)
    cdef double scale = -0.5 * x * x
    cdef double prev = 0.0
    cdef double cur = _PI_QUARTER
    cdef double nxt
    cdef int j
    out[0] = cur * exp(scale)
    for j in range(kmax):
        nxt = x * sqrt(2.0 / (j + 1)) * cur - sqrt(<double>j / (j + 1)) * prev
        prev = cur
        cur = nxt
        if fabs(cur) > _BIG:
            cur /= _BIG
            prev /= _BIG
            scale += _LOG_BIG
        out[j + 1] = cur * exp(scale) if cur != 0.0 else 0.0
    return out


def eigenfunction_table(int kmax, xs):
    """Array of shape (kmax + 1, len(xs)) with phi_k(xs[i])."""
    cdef double[:] xv = np.ascontiguousarray(xs, dtype=np.float64).ravel()
    cdef Py_ssize_t m = xv.shape[0]
    cdef cnp.ndarray[double, ndim=2] out = np.empty((kmax + 1, m))
    cdef double[:, :] ov = out
    # per-point state; g caches exp(scale) and is refreshed only on rescale
    cdef double[:] scale = np.empty(m)
    cdef double[:] g = np.empty(m)
    cdef double[:] prev = np.zeros(m)
    cdef double[:] cur = np.empty(m)
    cdef double[:] c1 = np.empty(max(kmax, 1))
    cdef double[:] c2 = np.empty(max(kmax, 1))
    cdef double nxt, a, b
    cdef Py_ssize_t i
    cdef int j
    with nogil:
        for j in range(kmax):
            c1[j] = sqrt(2.0 / (j + 1))
            c2[j] = sqrt(<double>j / (j + 1))
        for i in range(m):
            scale[i] = -0.5 * xv[i] * xv[i]
            g[i] = exp(scale[i])
            cur[i] = _PI_QUARTER
            ov[0, i] = _PI_QUARTER * g[i]
        for j in range(kmax):
            a = c1[j]
            b = c2[j]
            for i in range(m):
                nxt = xv[i] * a * cur[i] - b * prev[i]
                prev[i] = cur[i]
                cur[i] = nxt
                if fabs(nxt) > _BIG:
                    cur[i] = nxt / _BIG
                    prev[i] /= _BIG
                    scale[i] += _LOG_BIG
                    g[i] = exp(scale[i])
                ov[j + 1, i] = cur[i] * g[i]
    return out


def chi_printed_direct(n, O, p_aa):
    """Direct O(K^4) evaluation of the printed chi-norm triple sum.

    ``O`` holds normalized region-A overlaps, ``p_aa`` the pair bunching
    probabilities (only the k > l entries are read). Terms with a zero
    overlap factor are skipped.
    """
    cdef double[:] nv = np.ascontiguousarray(n, dtype=np.float64)
    cdef Py_ssize_t K = nv.shape[0]
    cdef double[:, :] B = np.ascontiguousarray(np.asarray(O, dtype=np.float64)[:K, :K] ** 2)
    cdef double[:, :] P = np.ascontiguousarray(np.asarray(p_aa, dtype=np.float64)[:K, :K])
    cdef double first = 0.0, second = 0.0, third = 0.0
    cdef double wkl, bk, bl, acc, wp
    cdef Py_ssize_t k, l, kp, lp
    with nogil:
        for k in range(K):
            for l in range(K):
                first += nv[k] * nv[k] * nv[l] * nv[l] * B[k, l] * B[k, l]
        for k in range(K):
            for l in range(k):
                wkl = nv[k] * nv[l] * P[k, l]
                if wkl == 0.0:
                    continue
                for kp in range(K):
                    bk = B[k, kp]
                    if bk == 0.0:
                        continue
                    for lp in range(kp):
                        bl = B[l, lp]
                        if bl == 0.0:
                            continue
                        second += wkl * nv[kp] * nv[lp] * P[kp, lp] * bk * bl
        for kp in range(K):
            for lp in range(kp):
                wp = nv[kp] * nv[lp] * P[kp, lp]
                if wp == 0.0:
                    continue
                acc = 0.0
                for k in range(K):
                    bk = B[k, kp]
                    if bk == 0.0:
                        continue
                    acc += nv[k] * nv[k] * bk * B[k, lp]
                third += wp * acc
    return 0.25 * first + second + third
