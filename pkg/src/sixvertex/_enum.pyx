# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled DWBC enumeration kernel; same API as ``_enum_py``."""
import numpy as np
cimport numpy as cnp

cnp.import_array()

DEF MAXN = 7
DEF MAXMASK = 128

A1, A2, B1, B2, C1, C2 = range(6)
MAX_N = MAXN


cdef int _build(int n, int[:] tcount, int[:, :] tnext, signed char[:, :, :] ttypes):
    """Fill the row-transition tables; returns the largest per-mask count."""
    cdef int top, choice, alpha, t, h, bottom, k, ok, best = 0
    cdef signed char types[MAXN]
    for top in range(1 << n):
        k = 0
        for choice in range(1 << n):
            h = 0
            bottom = 0
            ok = 1
            for alpha in range(n):
                t = (top >> alpha) & 1
                if t == h:
                    if (choice >> (n - 1 - alpha)) & 1:
                        ok = 0
                        break
                    bottom |= t << alpha
                    types[alpha] = 0 if t == 0 else 1
                elif (choice >> (n - 1 - alpha)) & 1 == 0:
                    bottom |= t << alpha
                    types[alpha] = 2 if t == 0 else 3
                else:
                    bottom |= h << alpha
                    types[alpha] = 4 if t == 1 else 5
                    h = t
            if ok and h == 1:
                tnext[top, k] = bottom
                for alpha in range(n):
                    ttypes[top, k, alpha] = types[alpha]
                k += 1
        tcount[top] = k
        if k > best:
            best = k
    return best


def _tables(int n):
    if n < 1 or n > MAXN:
        raise ValueError(f"n must be in 1..{MAXN}")
    tcount = np.zeros(1 << n, dtype=np.intc)
    tnext = np.zeros((1 << n, 1 << n), dtype=np.intc)
    ttypes = np.zeros((1 << n, 1 << n, n), dtype=np.int8)
    _build(n, tcount, tnext, ttypes)
    return tcount, tnext, ttypes


def count_configs(int n):
    tcount_a, tnext_a, _ = _tables(n)
    cdef int[:] tcount = tcount_a
    cdef int[:, :] tnext = tnext_a
    cdef cnp.int64_t[:] cur = np.zeros(1 << n, dtype=np.int64)
    cdef cnp.int64_t[:] nxt
    cdef int row, m, j
    cur[(1 << n) - 1] = 1
    for row in range(n):
        nxt = np.zeros(1 << n, dtype=np.int64)
        for m in range(1 << n):
            if cur[m]:
                for j in range(tcount[m]):
                    nxt[tnext[m, j]] += cur[m]
        cur = nxt
    return int(cur[0])


def enumerate_types(int n):
    """Vertex types of every configuration, shape ``(count, n, n)`` = [cfg, row, column]."""
    tcount_a, tnext_a, ttypes_a = _tables(n)
    cdef int[:] tcount = tcount_a
    cdef int[:, :] tnext = tnext_a
    cdef signed char[:, :, :] ttypes = ttypes_a
    cdef Py_ssize_t total = count_configs(n)
    out_a = np.empty((total, n, n), dtype=np.int8)
    cdef signed char[:, :, :] out = out_a
    cdef int masks[MAXN + 1]
    cdef int idx[MAXN + 1]
    cdef int chosen[MAXN]
    cdef int row = 0, m, j, r, alpha
    cdef Py_ssize_t pos = 0
    masks[0] = (1 << n) - 1
    idx[0] = 0
    while row >= 0:
        if row == n:
            for r in range(n):
                for alpha in range(n):
                    out[pos, r, alpha] = ttypes[masks[r], chosen[r], alpha]
            pos += 1
            row -= 1
            continue
        m = masks[row]
        if idx[row] < tcount[m]:
            j = idx[row]
            idx[row] += 1
            chosen[row] = j
            masks[row + 1] = tnext[m, j]
            idx[row + 1] = 0
            row += 1
        else:
            row -= 1
    return out_a
