"""Pure-Python fallback for the mode-sweep kernel.

Same contract as kspin.kernels._core.modp_nullities, implemented with
batched numpy int64 arithmetic: all matrices in a chunk are eliminated in
lockstep, one pivot column at a time.  Entries live in GF(p^2) as re/im
pairs with p = 3 mod 4.
"""

from __future__ import annotations

import numpy as np


def _pow_mod(base: np.ndarray, exp: int, p: int) -> np.ndarray:
    """Elementwise base**exp mod p by binary exponentiation (int64-safe)."""
    result = np.ones_like(base)
    b = base % p
    e = exp
    while e:
        if e & 1:
            result = (result * b) % p
        b = (b * b) % p
        e >>= 1
    return result


def _inv_mod(x: np.ndarray, p: int) -> np.ndarray:
    return _pow_mod(x, p - 2, p)


def _nullities_chunk(wre: np.ndarray, wim: np.ndarray, p: int) -> np.ndarray:
    n, rows, cols = wre.shape
    rank = np.zeros(n, dtype=np.int64)
    # rows 0..rank-1 of each matrix are the already-placed pivot rows
    idx = np.arange(n)
    for c in range(cols):
        nonzero = (wre[:, :, c] != 0) | (wim[:, :, c] != 0)
        # mask out settled pivot rows: row r is available iff r >= rank
        avail = np.arange(rows)[None, :] >= rank[:, None]
        cand = nonzero & avail
        has = cand.any(axis=1)
        if not has.any():
            continue
        piv = np.where(has, cand.argmax(axis=1), 0)
        # swap pivot row into position `rank`
        act = idx[has]
        pr, rk = piv[has], rank[has]
        for arr in (wre, wim):
            tmp = arr[act, pr, :].copy()
            arr[act, pr, :] = arr[act, rk, :]
            arr[act, rk, :] = tmp
        # pivot inverse: (a - ib) / (a^2 + b^2)
        a = wre[act, rk, c]
        b = wim[act, rk, c]
        dinv = _inv_mod((a * a + b * b) % p, p)
        ia = (a * dinv) % p
        ib = ((p - b) * dinv) % p
        # eliminate the column from all rows strictly below the pivot
        below = np.arange(rows)[None, :] > rk[:, None]
        col_re = np.where(below, wre[act, :, c], 0)
        col_im = np.where(below, wim[act, :, c], 0)
        fa = (col_re * ia[:, None] + (p - col_im) * ib[:, None]) % p
        fb = (col_re * ib[:, None] + col_im * ia[:, None]) % p
        prow_re = wre[act, rk, :]
        prow_im = wim[act, rk, :]
        tre = (fa[:, :, None] * prow_re[:, None, :]
               + (p - fb)[:, :, None] * prow_im[:, None, :]) % p
        tim = (fa[:, :, None] * prow_im[:, None, :]
               + fb[:, :, None] * prow_re[:, None, :]) % p
        wre[act] = (wre[act] - tre) % p
        wim[act] = (wim[act] - tim) % p
        rank[has] += 1
    return cols - rank


def modp_nullities(g0: np.ndarray, gs: np.ndarray, modes: np.ndarray,
                   p: int) -> np.ndarray:
    """Nullity over GF(p^2) of g0 + sum_l modes[i, l] * gs[l], per mode."""
    if p % 4 != 3:
        raise ValueError("p must be 3 mod 4 so that GF(p^2) is a field")
    g0 = np.asarray(g0, dtype=np.int64)
    gs = np.asarray(gs, dtype=np.int64)
    modes = np.asarray(modes, dtype=np.int64)
    rows, cols = g0.shape[0], g0.shape[1]
    if gs.shape[1:] != (rows, cols, 2) or modes.shape[1] != gs.shape[0]:
        raise ValueError("inconsistent kernel input shapes")
    n = modes.shape[0]
    out = np.empty(n, dtype=np.int64)
    chunk = max(1, 6_000_000 // max(1, rows * cols))
    for lo in range(0, n, chunk):
        hi = min(n, lo + chunk)
        block = np.einsum("nl,lrcz->nrcz", modes[lo:hi], gs) + g0[None]
        wre = np.ascontiguousarray(block[..., 0] % p)
        wim = np.ascontiguousarray(block[..., 1] % p)
        out[lo:hi] = _nullities_chunk(wre, wim, p)
    return out
