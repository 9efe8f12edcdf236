"""Pure-Python twin of the compiled eigensolver core.

Same algorithms (Householder tridiagonalization, implicit-shift QL with
deflation) with numpy-vectorized inner loops.  Selected automatically when
the compiled extension is unavailable; expect an order of magnitude less
throughput on large matrices.
"""

import math

import numpy as np

_EPS = np.finfo(np.float64).eps


def tridiagonalize(a, accumulate):
    """Reduce the symmetric matrix ``a`` to tridiagonal form in place.

    Returns ``(d, e)`` with ``e[i]`` coupling ``d[i]`` and ``d[i+1]``.  With
    ``accumulate`` the buffer is replaced by the orthogonal Q of the
    similarity transform.
    """
    n = a.shape[0]
    d = np.zeros(n)
    e = np.zeros(n)
    if n == 1:
        d[0] = a[0, 0]
        if accumulate:
            a[0, 0] = 1.0
        return d, e
    e_nr = np.zeros(n)
    h_stash = np.zeros(n)
    for i in range(n - 1, 0, -1):
        l = i - 1
        h = 0.0
        if l > 0:
            u = a[i, :i]
            scale = np.abs(u).sum()
            if scale == 0.0:
                e_nr[i] = a[i, l]
            else:
                u /= scale
                h = float(u @ u)
                f = u[l]
                g = -math.sqrt(h) if f >= 0.0 else math.sqrt(h)
                e_nr[i] = scale * g
                h -= f * g
                u[l] = f - g
                # the fallback keeps both triangles of the live block valid,
                # so a full symmetric matvec is safe here
                p = (a[:i, :i] @ u) / h
                hh = float(u @ p) / (2.0 * h)
                q = p - hh * u
                a[:i, :i] -= np.outer(q, u) + np.outer(u, q)
                a[:i, i] = u / h
        else:
            e_nr[i] = a[i, 0]
        h_stash[i] = h
    if accumulate:
        for i in range(n):
            if h_stash[i] != 0.0:
                u = a[i, :i]
                w = a[:i, i].copy()
                g = u @ a[:i, :i]
                a[:i, :i] -= np.outer(w, g)
            d[i] = a[i, i]
            a[i, i] = 1.0
            a[:i, i] = 0.0
            a[i, :i] = 0.0
    else:
        d[:] = np.diagonal(a)
    e[: n - 1] = e_nr[1:]
    e[n - 1] = 0.0
    return d, e


def ql(d, e, zt, cap):
    """Diagonalize the tridiagonal (d, e) in place; -1 on success.

    ``zt`` is either None (eigenvalues only) or a matrix whose rows receive
    the accumulated rotations.  Returns the failing block index when the
    sweep budget ``cap`` is exhausted.
    """
    n = d.shape[0]
    if n == 1:
        return -1
    with_vectors = zt is not None
    total = 0
    for l in range(n):
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= _EPS * dd:
                    break
                m += 1
            if m == l:
                break
            total += 1
            if total > cap:
                return l
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            restart = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
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
                    upper = s * zt[i] + c * zt[i + 1]
                    zt[i] = c * zt[i] - s * zt[i + 1]
                    zt[i + 1] = upper
            if restart:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return -1
