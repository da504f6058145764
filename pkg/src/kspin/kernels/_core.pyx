# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled mode-sweep kernel.

For each integer mode vector k the matrix G0 + sum_l k[l] * G[l] (Gaussian
integer entries, stored as int64 re/im pairs) is reduced over GF(p^2) with
p = 3 mod 4, and its nullity over that field is reported.  Since reduction
mod p can only lower the rank, a zero nullity here certifies zero nullity
over the rationals; nonzero values are screened again by the caller.
"""

from libc.stdlib cimport free, malloc


cdef inline long long _mod(long long x, long long p) nogil:
    x %= p
    if x < 0:
        x += p
    return x


cdef long long _inv_mod(long long a, long long p) nogil:
    # extended Euclid; a is nonzero mod p
    cdef long long old_r = a, r = p
    cdef long long old_s = 1, s = 0
    cdef long long q, tmp
    while r != 0:
        q = old_r / r
        tmp = old_r - q * r; old_r = r; r = tmp
        tmp = old_s - q * s; old_s = s; s = tmp
    return _mod(old_s, p)


cdef long long _nullity_one(long long* w, Py_ssize_t R, Py_ssize_t C,
                            long long p) nogil:
    """In-place elimination of the R x C complex matrix w (re/im interleaved)."""
    cdef Py_ssize_t rank = 0, c, r, cc, piv
    cdef long long a, b, d, dinv, ia, ib, fa, fb, tre, tim, p2 = p * p
    cdef long long* prow
    cdef long long* crow
    for c in range(C):
        piv = -1
        for r in range(rank, R):
            if w[2 * (r * C + c)] != 0 or w[2 * (r * C + c) + 1] != 0:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            for cc in range(2 * C):
                a = w[2 * piv * C + cc]
                w[2 * piv * C + cc] = w[2 * rank * C + cc]
                w[2 * rank * C + cc] = a
        prow = w + 2 * rank * C
        a = prow[2 * c]
        b = prow[2 * c + 1]
        d = _mod(a * a + b * b, p)
        dinv = _inv_mod(d, p)
        ia = (a * dinv) % p
        ib = ((p - b) * dinv) % p
        for r in range(rank + 1, R):
            crow = w + 2 * r * C
            a = crow[2 * c]
            b = crow[2 * c + 1]
            if a == 0 and b == 0:
                continue
            # f = entry * pivot^{-1}
            fa = (a * ia - b * ib + p2) % p
            fb = (a * ib + b * ia) % p
            for cc in range(c, C):
                tre = (fa * prow[2 * cc] - fb * prow[2 * cc + 1] + p2) % p
                tim = (fa * prow[2 * cc + 1] + fb * prow[2 * cc]) % p
                crow[2 * cc] = (crow[2 * cc] - tre + p) % p
                crow[2 * cc + 1] = (crow[2 * cc + 1] - tim + p) % p
        rank += 1
        if rank == C or rank == R:
            break
    return C - rank


def modp_nullities(long long[:, :, ::1] g0, long long[:, :, :, ::1] gs,
                   long long[:, ::1] modes, long long p):
    """Nullity over GF(p^2) of g0 + sum_l modes[i, l] * gs[l], per mode.

    g0: (R, C, 2), gs: (L, R, C, 2), modes: (N, L).  Returns int64 (N,).
    """
    import numpy as np
    if p % 4 != 3:
        raise ValueError("p must be 3 mod 4 so that GF(p^2) is a field")
    cdef Py_ssize_t R = g0.shape[0], C = g0.shape[1]
    cdef Py_ssize_t L = gs.shape[0], N = modes.shape[0]
    if gs.shape[1] != R or gs.shape[2] != C or modes.shape[1] != L:
        raise ValueError("inconsistent kernel input shapes")
    out_arr = np.empty(N, dtype=np.int64)
    cdef long long[::1] out = out_arr
    cdef long long* w = <long long*> malloc(2 * R * C * sizeof(long long))
    if w == NULL:
        raise MemoryError()
    cdef Py_ssize_t i, l, r, c
    cdef long long acc_re, acc_im, k
    try:
        with nogil:
            for i in range(N):
                for r in range(R):
                    for c in range(C):
                        acc_re = g0[r, c, 0]
                        acc_im = g0[r, c, 1]
                        for l in range(L):
                            k = modes[i, l]
                            if k != 0:
                                acc_re += k * gs[l, r, c, 0]
                                acc_im += k * gs[l, r, c, 1]
                        w[2 * (r * C + c)] = _mod(acc_re, p)
                        w[2 * (r * C + c) + 1] = _mod(acc_im, p)
                out[i] = _nullity_one(w, R, C, p)
    finally:
        free(w)
    return out_arr
