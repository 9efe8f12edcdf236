# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled eigensolver core: Householder tridiagonalization and implicit-shift QL.

Hot kernels only; sorting, sign conventions and validation live in
``speclim.symspec``.  The pure-Python twin of this module is
``speclim._kernel._pyeigen``.
"""

from libc.math cimport fabs, sqrt, hypot, copysign
from libc.float cimport DBL_EPSILON
from libc.stdlib cimport malloc, free

import numpy as np


cdef void _householder_phase(double* a, double* d, double* e_nr,
                             double* p, double* q, Py_ssize_t n) nogil:
    # Reduce a (row-major, n*n, symmetric) to tridiagonal form working on the
    # lower triangle.  Row i keeps the scaled Householder vector u, column i
    # keeps u/h for the accumulation phase, d[i] stashes h.
    cdef Py_ssize_t i, j, k, l
    cdef double h, scale, f, g, hh, uk, s
    cdef double* rowi
    cdef double* rowk
    for i in range(n - 1, 0, -1):
        l = i - 1
        rowi = a + i * n
        h = 0.0
        if l > 0:
            scale = 0.0
            for k in range(l + 1):
                scale += fabs(rowi[k])
            if scale == 0.0:
                e_nr[i] = rowi[l]
            else:
                for k in range(l + 1):
                    rowi[k] /= scale
                    h += rowi[k] * rowi[k]
                f = rowi[l]
                g = -sqrt(h) if f >= 0.0 else sqrt(h)
                e_nr[i] = scale * g
                h -= f * g
                rowi[l] = f - g
                # p = A u / h using the lower triangle only, row-wise
                for j in range(l + 1):
                    p[j] = 0.0
                for k in range(l + 1):
                    rowk = a + k * n
                    uk = rowi[k]
                    s = 0.0
                    for j in range(k):
                        p[j] += rowk[j] * uk
                        s += rowk[j] * rowi[j]
                    p[k] += s + rowk[k] * uk
                f = 0.0
                for j in range(l + 1):
                    a[j * n + i] = rowi[j] / h
                    p[j] /= h
                    f += p[j] * rowi[j]
                hh = f / (h + h)
                for j in range(l + 1):
                    q[j] = p[j] - hh * rowi[j]
                # rank-2 update of the lower triangle: A -= q u^T + u q^T
                for j in range(l + 1):
                    f = rowi[j]
                    g = q[j]
                    rowk = a + j * n
                    for k in range(j + 1):
                        rowk[k] -= f * q[k] + g * rowi[k]
        else:
            e_nr[i] = rowi[l]
        d[i] = h


cdef void _accumulate_phase(double* a, double* d, double* g,
                            Py_ssize_t n) nogil:
    # Replace a by the orthogonal Q with Q^T A_orig Q tridiagonal.
    cdef Py_ssize_t i, j, k
    cdef double uk, w
    cdef double* rowk
    cdef double* rowi
    for i in range(n):
        rowi = a + i * n
        if d[i] != 0.0:
            for j in range(i):
                g[j] = 0.0
            for k in range(i):
                rowk = a + k * n
                uk = rowi[k]
                for j in range(i):
                    g[j] += uk * rowk[j]
            for k in range(i):
                rowk = a + k * n
                w = rowk[i]
                for j in range(i):
                    rowk[j] -= g[j] * w
        d[i] = rowi[i]
        rowi[i] = 1.0
        for j in range(i):
            a[j * n + i] = 0.0
            rowi[j] = 0.0


cdef long _ql_sweeps(double* d, double* e, double* zt, Py_ssize_t n,
                     bint with_vectors, long cap) nogil:
    # Implicit-shift QL with deflation on the tridiagonal (d, e); e[i] couples
    # d[i] and d[i+1], e[n-1] == 0.  When with_vectors, zt holds the current
    # transpose of the eigenvector matrix and rotations act on row pairs.
    # Returns -1 on success, else the index of the block that failed to
    # converge within the sweep budget.
    cdef Py_ssize_t l, m, i, k
    cdef long total = 0
    cdef double dd, g, r, s, c, p, f, b, t
    cdef double* zi
    cdef double* zi1
    cdef bint restart
    for l in range(n):
        while True:
            m = l
            while m < n - 1:
                dd = fabs(d[m]) + fabs(d[m + 1])
                if fabs(e[m]) <= DBL_EPSILON * dd:
                    break
                m += 1
            if m == l:
                break
            total += 1
            if total > cap:
                return <long>l
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            restart = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    restart = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if with_vectors:
                    zi = zt + i * n
                    zi1 = zt + (i + 1) * n
                    for k in range(n):
                        t = zi1[k]
                        zi1[k] = s * zi[k] + c * t
                        zi[k] = c * zi[k] - s * t
            if restart:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return -1


def tridiagonalize(double[:, ::1] a, bint accumulate):
    """Reduce the symmetric matrix ``a`` to tridiagonal form in place.

    Returns ``(d, e)`` where ``e[i]`` couples ``d[i]`` and ``d[i+1]``.  With
    ``accumulate`` the buffer is replaced by the orthogonal Q of the
    similarity transform, otherwise it is scratch afterwards.
    """
    cdef Py_ssize_t n = a.shape[0]
    if a.shape[1] != n:
        raise ValueError("square matrix required")
    d_arr = np.zeros(n)
    e_arr = np.zeros(n)
    if n == 1:
        d_arr[0] = a[0, 0]
        if accumulate:
            a[0, 0] = 1.0
        return d_arr, e_arr
    cdef double[::1] d = d_arr
    cdef double[::1] e_nr = np.zeros(n)
    cdef double[::1] e = e_arr
    cdef double* p = <double*>malloc(2 * n * sizeof(double))
    if p == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    try:
        with nogil:
            _householder_phase(&a[0, 0], &d[0], &e_nr[0], p, p + n, n)
            if accumulate:
                d[0] = 0.0
                _accumulate_phase(&a[0, 0], &d[0], p, n)
            else:
                for i in range(n):
                    d[i] = a[i, i]
            for i in range(n - 1):
                e[i] = e_nr[i + 1]
            e[n - 1] = 0.0
    finally:
        free(p)
    return d_arr, e_arr


def ql(double[::1] d, double[::1] e, zt, long cap):
    """Diagonalize the tridiagonal (d, e) in place; -1 on success.

    ``zt`` is either None (eigenvalues only) or a C-contiguous matrix whose
    rows receive the accumulated rotations.
    """
    cdef Py_ssize_t n = d.shape[0]
    cdef double[:, ::1] z
    cdef long res
    if n == 1:
        return -1
    if zt is None:
        with nogil:
            res = _ql_sweeps(&d[0], &e[0], NULL, n, 0, cap)
    else:
        z = zt
        if z.shape[0] != n or z.shape[1] != n:
            raise ValueError("vector buffer shape mismatch")
        with nogil:
            res = _ql_sweeps(&d[0], &e[0], &z[0, 0], n, 1, cap)
    return res
