# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled survival kernels; see runchart._kernel_py for the reference semantics."""

import numpy as np


def survival(int n, int m, int[::1] next0, int[::1] next1):
    """P(no pattern occurrence | exactly m ones among n trials)."""
    cdef int E = next0.shape[0]
    if n == 0:
        return 1.0
    cur_arr = np.zeros((m + 1, E), dtype=np.float64)
    nxt_arr = np.zeros((m + 1, E), dtype=np.float64)
    cdef double[:, ::1] cur = cur_arr
    cdef double[:, ::1] nxt = nxt_arr
    cdef double[:, ::1] tmp
    cur[0, 0] = 1.0
    cdef int t, l, si, lo, hi, d0, d1
    cdef double denom, w1, w0, p, total
    for t in range(1, n + 1):
        denom = n - t + 1
        lo = m - (n - (t - 1))
        if lo < 0:
            lo = 0
        hi = t - 1
        if hi > m:
            hi = m
        for l in range(lo, hi + 1):
            w1 = (m - l) / denom
            w0 = 1.0 - w1
            for si in range(E):
                p = cur[l, si]
                if p == 0.0:
                    continue
                if w1 > 0.0:
                    d1 = next1[si]
                    if d1 >= 0:
                        nxt[l + 1, d1] += p * w1
                if w0 > 0.0:
                    d0 = next0[si]
                    if d0 >= 0:
                        nxt[l, d0] += p * w0
        tmp = cur
        cur = nxt
        nxt = tmp
        nxt[:, :] = 0.0
    total = 0.0
    for si in range(E):
        total += cur[m, si]
    return total


def extend(double[:, ::1] g, double[:, ::1] q_out, int t_start, int t_end,
           int[::1] next0, int[::1] next1):
    """Advance per-count conditional survival rows t_start..t_end in place."""
    cdef int l_cap = g.shape[0] - 1
    cdef int E = g.shape[1]
    scratch_arr = np.zeros((l_cap + 1, E), dtype=np.float64)
    cdef double[:, ::1] scratch = scratch_arr
    cdef int t, l, si, d0, d1, lmax
    cdef double w0, w1, p, tt, total
    for t in range(t_start, t_end + 1):
        tt = t
        scratch[:, :] = 0.0
        lmax = t - 1
        if lmax > l_cap:
            lmax = l_cap
        for l in range(lmax + 1):
            w0 = (t - l) / tt
            w1 = (l + 1) / tt
            for si in range(E):
                p = g[l, si]
                if p == 0.0:
                    continue
                d0 = next0[si]
                if d0 >= 0:
                    scratch[l, d0] += p * w0
                if l < l_cap:
                    d1 = next1[si]
                    if d1 >= 0:
                        scratch[l + 1, d1] += p * w1
        g[:, :] = scratch
        for l in range(l_cap + 1):
            total = 0.0
            for si in range(E):
                total += g[l, si]
            q_out[t - t_start, l] = total
