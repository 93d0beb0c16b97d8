# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernel for power-cost profile evaluation.

Single linear merge of the two sorted level families per call; this is the
hot inner loop of the solver (one call per binary-search iteration).
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, floor, pow

BACKEND = "compiled"

cdef extern from "math.h":
    double INFINITY


cdef inline double _cost(double x, double y, double lam) nogil:
    cdef double d = fabs(x - y)
    if lam == 1.0:
        return d
    if lam == 2.0:
        return d * d
    return pow(d, lam)


cdef inline Py_ssize_t _bisect_right(const double[::1] a, double v) nogil:
    cdef Py_ssize_t lo = 0, hi = a.shape[0], mid
    while lo < hi:
        mid = (lo + hi) // 2
        if v < a[mid]:
            hi = mid
        else:
            lo = mid + 1
    return lo


cdef inline Py_ssize_t _bisect_left(const double[::1] a, double v) nogil:
    cdef Py_ssize_t lo = 0, hi = a.shape[0], mid
    while lo < hi:
        mid = (lo + hi) // 2
        if a[mid] < v:
            lo = mid + 1
        else:
            hi = mid
    return lo


def power_eval(const double[::1] pos0, const double[::1] cum0,
               const double[::1] pos1, const double[::1] cum1,
               double theta, double lam, double tol):
    """Return (value, dleft, dright, exceptional, cost_evaluations)."""
    cdef Py_ssize_t n0 = pos0.shape[0]
    cdef Py_ssize_t n1 = pos1.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] b_arr = np.empty(n1, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] y_arr = np.empty(n1, dtype=np.float64)
    cdef double[::1] b = b_arr
    cdef double[::1] y = y_arr

    cdef Py_ssize_t j, s = 0
    cdef double k
    for j in range(n1):
        k = floor(theta - cum1[j]) + 1.0
        b[j] = cum1[j] + k - theta
        y[j] = pos1[j] + k
        if b[j] < b[s]:
            s = j

    # merge: i walks source levels, t walks rotated target levels
    cdef Py_ssize_t i = 0, t = 0, jj
    cdef double prev = 0.0, value = 0.0
    cdef double fa, fb, v, x, yy
    cdef bint exceptional = 0
    while i < n0 or t < n1:
        fa = cum0[i] if i < n0 else INFINITY
        if t < n1:
            jj = s + t
            if jj >= n1:
                jj -= n1
            fb = b[jj]
            yy = y[jj]
        else:
            fb = INFINITY
            yy = y[s] + 1.0
        x = pos0[i] if i < n0 else pos0[0] + 1.0
        if fa < INFINITY and fb < INFINITY and fabs(fa - fb) <= tol:
            exceptional = 1
        if fa <= fb:
            v = fa
            i += 1
        else:
            v = fb
            t += 1
        value += _cost(x, yy, lam) * (v - prev)
        prev = v

    # one-sided derivatives over one period of target atoms
    cdef double dleft = 0.0, dright = 0.0
    cdef double blev, yj, yn, xl, xr
    cdef Py_ssize_t il, ir
    for t in range(n1):
        jj = s + t
        if jj >= n1:
            jj -= n1
        blev = b[jj]
        yj = y[jj]
        if t < n1 - 1:
            jj = jj + 1
            if jj >= n1:
                jj -= n1
            yn = y[jj]
        else:
            yn = y[s] + 1.0
        il = _bisect_right(cum0, blev)
        xl = pos0[il] if il < n0 else pos0[0] + 1.0
        ir = _bisect_left(cum0, blev)
        if ir > n0 - 1:
            ir = n0 - 1
        xr = pos0[ir]
        dleft += _cost(xl, yn, lam) - _cost(xl, yj, lam)
        dright += _cost(xr, yn, lam) - _cost(xr, yj, lam)

    return value, dleft, dright, bool(exceptional), (n0 + n1) + 4 * n1
