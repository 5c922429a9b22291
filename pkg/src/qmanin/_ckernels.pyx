# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: log-polar sums, log power sums, Vandermonde
powers and weighted Gram assembly.  Mirrors qmanin._pykernels."""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin, exp, log, INFINITY

cnp.import_array()

NAME = "cython"


def csum_logpolar(object logmag_in, object phase_in):
    """Sum of exp(logmag[n]) * e^{i*phase[n]} as (acc, scale)."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] logmag = \
        np.ascontiguousarray(logmag_in, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] phase = \
        np.ascontiguousarray(phase_in, dtype=np.float64)
    cdef Py_ssize_t n = logmag.shape[0]
    cdef Py_ssize_t k
    cdef double m = -INFINITY
    cdef double re = 0.0, im = 0.0, mag
    if n == 0:
        return 0j, -INFINITY
    for k in range(n):
        if logmag[k] > m:
            m = logmag[k]
    if m == -INFINITY:
        return 0j, -INFINITY
    for k in range(n):
        mag = exp(logmag[k] - m)
        re += mag * cos(phase[k])
        im += mag * sin(phase[k])
    return complex(re, im), m


def log_power_sums(object log_nodes_in, object log_masses_in, Py_ssize_t nmax):
    """log of S_n = sum_i mass_i * node_i**n for n = 0..nmax."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] log_nodes = \
        np.ascontiguousarray(log_nodes_in, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] log_masses = \
        np.ascontiguousarray(log_masses_in, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(nmax + 1, dtype=np.float64)
    cdef Py_ssize_t npts = log_nodes.shape[0]
    cdef Py_ssize_t i, n
    cdef double m, s, t
    for n in range(nmax + 1):
        m = -INFINITY
        for i in range(npts):
            t = log_masses[i] + n * log_nodes[i]
            if t > m:
                m = t
        if m == -INFINITY:
            out[n] = -INFINITY
            continue
        s = 0.0
        for i in range(npts):
            s += exp(log_masses[i] + n * log_nodes[i] - m)
        out[n] = m + log(s)
    return out


def power_matrix(object z_in, Py_ssize_t nmax):
    """V[p, k] = z_p**k for k = 0..nmax."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] z = \
        np.ascontiguousarray(z_in, dtype=np.complex128)
    cdef Py_ssize_t npts = z.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] V = \
        np.empty((npts, nmax + 1), dtype=np.complex128)
    cdef Py_ssize_t p, k
    for p in range(npts):
        V[p, 0] = 1.0
        for k in range(1, nmax + 1):
            V[p, k] = V[p, k - 1] * z[p]
    return V


def weighted_gram(object V_in, object wts_in):
    """G[j, k] = sum_p V[p, j] * wts_p * conj(V[p, k])."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] V = \
        np.ascontiguousarray(V_in, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] wts = \
        np.ascontiguousarray(wts_in, dtype=np.complex128)
    cdef Py_ssize_t npts = V.shape[0]
    cdef Py_ssize_t ncols = V.shape[1]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] G = \
        np.zeros((ncols, ncols), dtype=np.complex128)
    cdef Py_ssize_t p, j, k
    cdef double complex wv
    for p in range(npts):
        for j in range(ncols):
            wv = V[p, j] * wts[p]
            for k in range(ncols):
                G[j, k] = G[j, k] + wv * V[p, k].conjugate()
    return G
