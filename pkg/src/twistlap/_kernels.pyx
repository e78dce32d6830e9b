# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numeric kernels; ``_kernels_py`` is the reference fallback."""
import cmath
import math

import numpy as np

cimport numpy as cnp
from libc.math cimport isfinite

cdef extern from "complex.h" nogil:
    double cabs(double complex z)


def gaussian_moment_1d(int a, int b, double complex alpha,
                       double complex beta, double complex gamma):
    cdef double complex k_ = -1.0 / alpha
    cdef double complex total = 0
    cdef double complex t
    cdef int k, i
    cdef double w
    for k in range(min(a, b) + 1):
        w = math.comb(b, k) * math.perm(a, k)
        t = w
        for i in range(a + b - k):
            t *= k_
        for i in range(a - k):
            t *= gamma
        for i in range(b - k):
            t *= beta
        total += t
    return math.pi * k_ * cmath.exp(k_ * beta * gamma) * total


def moment_table(int amax, int bmax, double complex alpha,
                 double complex beta, double complex gamma):
    return [[gaussian_moment_1d(a, b, alpha, beta, gamma) for b in range(bmax + 1)]
            for a in range(amax + 1)]


def pair_moment_sum(exps_f, coefs_f, exps_g, coefs_g, alpha, beta, gamma):
    cdef Py_ssize_t n = len(beta)
    if not len(exps_f) or not len(exps_g):
        return 0j, 0.0
    cdef cnp.int64_t[:, :] ef = np.ascontiguousarray(exps_f, dtype=np.int64)
    cdef cnp.int64_t[:, :] eg = np.ascontiguousarray(exps_g, dtype=np.int64)
    cdef double complex[:] cf = np.ascontiguousarray(coefs_f, dtype=np.complex128)
    cdef double complex[:] cg = np.ascontiguousarray(
        np.conjugate(np.asarray(coefs_g, dtype=np.complex128)))
    cdef Py_ssize_t j, s, t
    cdef int amax, bmax, width = 0
    dims = []
    for j in range(n):
        amax = int(np.max(ef[:, j])) + int(np.max(eg[:, n + j]))
        bmax = int(np.max(ef[:, n + j])) + int(np.max(eg[:, j]))
        dims.append((amax + 1, bmax + 1))
        width = max(width, amax + 1, bmax + 1)
    tab_np = np.zeros((n, width, width), dtype=np.complex128)
    for j in range(n):
        tab_np[j, :dims[j][0], :dims[j][1]] = moment_table(
            dims[j][0] - 1, dims[j][1] - 1, alpha, beta[j], gamma[j])
    cdef double complex[:, :, :] tab = tab_np
    cdef double complex value = 0
    cdef double mag = 0
    cdef double complex p
    cdef Py_ssize_t nf = ef.shape[0], ng = eg.shape[0]
    with nogil:
        for s in range(nf):
            for t in range(ng):
                p = cf[s] * cg[t]
                for j in range(n):
                    p = p * tab[j, ef[s, j] + eg[t, n + j], ef[s, n + j] + eg[t, j]]
                value = value + p
                mag = mag + cabs(p)
    return complex(value), float(mag)


def hyp1f1_series(double complex a, double complex c, double complex x,
                  double rtol, int max_terms):
    cdef double complex term = 1
    cdef double complex total = 1
    cdef int k
    for k in range(max_terms):
        term = term * (a + k) / (c + k) * x / (k + 1)
        total = total + term
        if not (isfinite(total.real) and isfinite(total.imag)):
            return complex(total), -1
        if term == 0 or cabs(term) < rtol * cabs(total):
            return complex(total), k + 2
    return complex(total), -1
