# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled radiation-rate kernel; same contract as ``_kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt
from scipy.constants import mu_0
from scipy.special.cython_special cimport yv

cnp.import_array()

cdef double MU0 = mu_0


cdef void _bessel_j_miller(double x, long n_max, double[::1] jt):
    """J_0..J_n_max by downward recurrence normalized with J_0 + 2 sum J_2k = 1."""
    cdef long j
    cdef long start = n_max + 40 + <long> (x + 10.0 * sqrt(x + 1.0))
    cdef long k
    cdef double nxt = 0.0, cur = 1e-300, prev, norm = 0.0
    cdef double big = 1e250
    if start % 2:
        start += 1
    for k in range(n_max + 1):
        jt[k] = 0.0
    for k in range(start, 0, -1):
        prev = (2.0 * k / x) * cur - nxt
        nxt = cur
        cur = prev
        # cur now holds J_{k-1}
        if k - 1 <= n_max:
            jt[k - 1] = cur
        if (k - 1) % 2 == 0:
            norm += cur if k - 1 == 0 else 2.0 * cur
        if cur > big or cur < -big:
            cur /= big
            nxt /= big
            norm /= big
            for j in range(k - 1, n_max + 1):
                jt[j] /= big
    for k in range(n_max + 1):
        jt[k] /= norm


cdef inline double _pick(double[::1] table, long n):
    if n >= 0:
        return table[n]
    if (-n) % 2:
        return -table[-n]
    return table[-n]


def radiation_shell_sums(double r, double omega, double[::1] beta, double[::1] weights,
                         double[::1] sigma, double complex[:, :, :, ::1] coefs,
                         long[::1] l_values):
    cdef Py_ssize_t n = beta.shape[0]
    cdef Py_ssize_t n_l = l_values.shape[0]
    cdef Py_ssize_t il, i, p, k
    cdef long l, n_max = 0
    cdef double x, scale, wm = omega * MU0
    cdef double jm, j0, jp, ym, y0, yp
    cdef double complex cj, cy, dj, dy, em, e0, ep, ib
    cdef double[:, ::1] out = np.zeros((3, n_l))
    for il in range(n_l):
        l = l_values[il] if l_values[il] >= 0 else -l_values[il]
        if l + 1 > n_max:
            n_max = l + 1
    cdef double[::1] jt = np.empty(n_max + 1)
    cdef double[::1] yt = np.empty(n_max + 1)
    cdef bint live
    for i in range(n):
        x = sigma[i] * r
        _bessel_j_miller(x, n_max, jt)
        yt[0] = yv(0.0, x)
        yt[1] = yv(1.0, x)
        for k in range(1, n_max):
            yt[k + 1] = (2.0 * k / x) * yt[k] - yt[k - 1]
        scale = 1.0 / (sqrt(2.0) * sigma[i])
        ib = 1j * beta[i]
        for il in range(n_l):
            live = False
            for p in range(2):
                for k in range(4):
                    if coefs[il, p, k, i] != 0:
                        live = True
            if not live:
                continue
            l = l_values[il]
            jm = _pick(jt, l - 1)
            j0 = _pick(jt, l)
            jp = _pick(jt, l + 1)
            ym = _pick(yt, l - 1)
            y0 = _pick(yt, l)
            yp = _pick(yt, l + 1)
            for p in range(2):
                cj = coefs[il, p, 0, i]
                cy = coefs[il, p, 1, i]
                dj = coefs[il, p, 2, i]
                dy = coefs[il, p, 3, i]
                em = (ib * (cj * jm + cy * ym) - wm * (dj * jm + dy * ym)) * scale
                e0 = cj * j0 + cy * y0
                ep = (ib * (cj * jp + cy * yp) + wm * (dj * jp + dy * yp)) * scale
                out[0, il] += weights[i] * (em.real * em.real + em.imag * em.imag)
                out[1, il] += weights[i] * (e0.real * e0.real + e0.imag * e0.imag)
                out[2, il] += weights[i] * (ep.real * ep.real + ep.imag * ep.imag)
    return np.asarray(out)
