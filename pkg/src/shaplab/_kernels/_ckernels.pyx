# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the hot kernels; see ``_pykernels`` for semantics."""
import numpy as np

from libc.stdint cimport int64_t, uint8_t


def shift_weights(const uint8_t[::1] d, const uint8_t[::1] e):
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t i, k, src
    cdef int64_t acc
    out = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] w = out
    for i in range(n):
        acc = 0
        src = n - i if i else 0
        for k in range(n):
            if src == n:
                src = 0
            acc += d[src] != e[k]
            src += 1
        w[i] = acc
    return out


def fwht(a):
    out = np.array(a, dtype=np.float64, copy=True)
    cdef double[::1] v = out
    cdef Py_ssize_t size = v.shape[0]
    cdef Py_ssize_t h = 1, start, k
    cdef double x, y
    while h < size:
        start = 0
        while start < size:
            for k in range(start, start + h):
                x = v[k]
                y = v[k + h]
                v[k] = x + y
                v[k + h] = x - y
            start += 2 * h
        h *= 2
    return out


def project_accept(const double complex[::1] psi, Py_ssize_t n, Py_ssize_t t,
                   Py_ssize_t i, const double[::1] coef):
    cdef Py_ssize_t dim = psi.shape[0]
    cdef Py_ssize_t nn = n * n
    out = np.zeros(dim, dtype=np.complex128)
    cdef double complex[::1] res = out
    cdef Py_ssize_t nsub = 1 << t
    cdef Py_ssize_t x, r, T, j, a, b, half
    cdef double complex z
    cdef double c, acc_re, acc_im
    if t > 20:
        raise ValueError("too many repetitions")
    # offset[p] moves pair digit p = a*n + b to its source under (a, b) <- (b - i, a + i)
    offset_arr = np.empty(nn, dtype=np.int64)
    cdef int64_t[::1] offset = offset_arr
    for a in range(n):
        for b in range(n):
            offset[a * n + b] = ((b - i + n) % n) * n + (a + i) % n - (a * n + b)
    strides_arr = np.empty(t, dtype=np.int64)
    cdef int64_t[::1] strides = strides_arr
    cdef Py_ssize_t stride = 1
    for r in range(t - 1, -1, -1):
        strides[r] = stride
        stride *= nn
    # per-subset source shift and coefficient, rebuilt for every output index
    shift_arr = np.zeros(nsub, dtype=np.int64)
    cdef int64_t[::1] shift = shift_arr
    sizes_arr = np.zeros(nsub, dtype=np.int64)
    cdef int64_t[::1] sizes = sizes_arr
    for T in range(1, nsub):
        sizes[T] = sizes[T & (T - 1)] + 1
    delta_arr = np.zeros(t, dtype=np.int64)
    cdef int64_t[::1] delta = delta_arr
    digit_arr = np.zeros(t, dtype=np.int64)
    cdef int64_t[::1] digit = digit_arr
    for r in range(t):
        delta[r] = offset[0] * strides[r]
    for x in range(dim):
        half = 1
        for r in range(t):
            for j in range(half):
                shift[half + j] = shift[j] + delta[r]
            half *= 2
        # real and imaginary parts separately: a complex product would call __muldc3
        acc_re = 0.0
        acc_im = 0.0
        for T in range(nsub):
            c = coef[sizes[T]]
            if c != 0.0:
                z = psi[x + shift[T]]
                acc_re += c * z.real
                acc_im += c * z.imag
        res[x].real = acc_re
        res[x].imag = acc_im
        # advance the pair digits of x like an odometer, last repetition fastest
        r = t - 1
        while r >= 0:
            digit[r] += 1
            if digit[r] < nn:
                delta[r] = offset[digit[r]] * strides[r]
                break
            digit[r] = 0
            delta[r] = offset[0] * strides[r]
            r -= 1
    return out


def sampled_estimates(const uint8_t[::1] d, const uint8_t[::1] in_s1,
                      const uint8_t[::1] e, const int64_t[::1] s2):
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t k = s2.shape[0]
    cdef Py_ssize_t i, q, j, partner
    counts = np.zeros(n, dtype=np.int64)
    ones = np.zeros(n, dtype=np.int64)
    cdef int64_t[::1] cv = counts
    cdef int64_t[::1] ov = ones
    for i in range(n):
        for q in range(k):
            j = s2[q]
            partner = j - i
            if partner < 0:
                partner += n
            if in_s1[partner]:
                cv[i] += 1
                ov[i] += d[partner] ^ e[j]
    return counts, ones
