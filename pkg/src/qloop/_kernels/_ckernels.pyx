# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in ``_fallback.py``."""
import numpy as np

from libc.math cimport cos, sin, sqrt, NAN

cdef double DEGENERATE = 1e-14


cdef inline double cabs2(double complex z) nogil:
    return z.real * z.real + z.imag * z.imag


def series_partial_sum(u00, lead, m, u10, Py_ssize_t n_terms):
    cdef double complex[:, ::1] acc = np.array(u00, dtype=complex, order="C")
    cdef double complex[:, ::1] L = np.ascontiguousarray(lead, dtype=complex)
    cdef double complex[:, ::1] M = np.ascontiguousarray(m, dtype=complex)
    cdef double complex[:, ::1] v = np.array(u10, dtype=complex, order="C")
    cdef double complex[:, ::1] w = np.empty_like(np.asarray(v))
    cdef double complex[:, ::1] tmp
    cdef Py_ssize_t p = L.shape[0], q = L.shape[1], r = v.shape[1]
    cdef Py_ssize_t it, i, j, k
    cdef double complex s
    with nogil:
        for it in range(n_terms):
            for i in range(p):
                for j in range(r):
                    s = 0
                    for k in range(q):
                        s = s + L[i, k] * v[k, j]
                    acc[i, j] = acc[i, j] + s
            for i in range(q):
                for j in range(r):
                    s = 0
                    for k in range(q):
                        s = s + M[i, k] * v[k, j]
                    w[i, j] = s
            tmp = v
            v = w
            w = tmp
    return np.asarray(acc)


def rotation_loop_phase(double omega, double phi, t):
    t = np.asarray(t, dtype=float)
    cdef double[::1] tv = np.ascontiguousarray(t).ravel()
    out_values = np.empty(tv.shape[0], dtype=complex)
    out_flags = np.zeros(tv.shape[0], dtype=np.uint8)
    cdef double complex[::1] values = out_values
    cdef unsigned char[::1] flags = out_flags
    cdef double complex e_plus = cos(phi) + 1j * sin(phi)
    cdef double complex e_minus = cos(phi) - 1j * sin(phi)
    cdef double complex den
    cdef double c
    cdef Py_ssize_t i
    with nogil:
        for i in range(tv.shape[0]):
            c = cos(omega * tv[i])
            den = e_minus - c
            if cabs2(den) < DEGENERATE * DEGENERATE:
                flags[i] = 1
                values[i] = NAN + 1j * NAN
            else:
                values[i] = -e_minus * (e_plus - c) / den
    return out_values.reshape(t.shape), out_flags.astype(bool).reshape(t.shape)


def resonator_fields_array(t_coupling, kappa, double alpha, theta):
    theta = np.asarray(theta, dtype=float)
    cdef double[::1] th = np.ascontiguousarray(theta).ravel()
    cdef Py_ssize_t n = th.shape[0]
    a1 = np.empty(n, dtype=complex)
    a2 = np.empty(n, dtype=complex)
    a3 = np.empty(n, dtype=complex)
    af = np.zeros(n, dtype=np.uint8)
    cdef double complex[::1] et1 = a1
    cdef double complex[::1] ei2 = a2
    cdef double complex[::1] et2 = a3
    cdef unsigned char[::1] flags = af
    cdef double complex t = complex(t_coupling)
    cdef double complex tb = t.conjugate()
    cdef double complex kb = complex(kappa).conjugate()
    cdef double complex em, ep, d1, d2
    cdef double complex cnan = NAN + 1j * NAN
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            em = cos(th[i]) - 1j * sin(th[i])
            ep = cos(th[i]) + 1j * sin(th[i])
            d1 = -alpha * tb + em
            d2 = 1.0 - alpha * tb * ep
            if cabs2(d1) < DEGENERATE * DEGENERATE or cabs2(d2) < DEGENERATE * DEGENERATE:
                flags[i] = 1
                et1[i] = cnan
                ei2[i] = cnan
                et2[i] = cnan
            else:
                et1[i] = (-alpha + t * em) / d1
                ei2[i] = -alpha * kb / d1
                et2[i] = -kb / d2
    shape = theta.shape
    return a1.reshape(shape), a2.reshape(shape), a3.reshape(shape), af.astype(bool).reshape(shape)


def jordan_matrix(x, int cutoff):
    cdef double complex[:, ::1] xv = np.ascontiguousarray(x, dtype=complex)
    cdef int side = cutoff + 1
    cdef Py_ssize_t dim = side * side
    out_arr = np.zeros((dim, dim), dtype=complex)
    cdef double complex[:, ::1] out = out_arr
    cdef int n0, n1
    cdef Py_ssize_t j
    with nogil:
        for n0 in range(side):
            for n1 in range(side):
                j = n0 * side + n1
                out[j, j] = out[j, j] + xv[0, 0] * n0 + xv[1, 1] * n1
                if n1 > 0 and n0 < cutoff:
                    out[(n0 + 1) * side + n1 - 1, j] += xv[0, 1] * sqrt(<double>(n1 * (n0 + 1)))
                if n0 > 0 and n1 < cutoff:
                    out[(n0 - 1) * side + n1 + 1, j] += xv[1, 0] * sqrt(<double>(n0 * (n1 + 1)))
    return out_arr
