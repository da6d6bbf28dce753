# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled budget-DP kernel.

Keep every floating-point operation in the same order as _dpcore_py.py: the
pure-Python twin must produce bit-identical tables (a test asserts this).
"""

from libc.math cimport INFINITY, fabs, floor, log
from libc.string cimport memcpy

import numpy as np

cimport numpy as cnp

cnp.import_array()

DEF SNAP = 1e-9


def build_buckets(long k_min, long k_max, pi):
    """CSR schedule: bucket[col] = edges whose frequency divides k_min + col."""
    cdef long W = k_max - k_min + 1
    cdef cnp.int64_t[::1] freqs = np.ascontiguousarray(pi, dtype=np.int64)
    cdef long m = freqs.shape[0]
    counts_arr = np.zeros(W + 1, dtype=np.int64)
    cdef cnp.int64_t[::1] counts = counts_arr
    cdef long e, p, k0, k
    for e in range(m):
        p = freqs[e]
        k0 = -((-k_min) // p) * p
        for k in range(k0, k_max + 1, p):
            counts[k - k_min + 1] += 1
    cdef long col
    for col in range(W):
        counts[col + 1] += counts[col]
    edges_arr = np.empty(counts[W], dtype=np.int32)
    cdef cnp.int32_t[::1] edges = edges_arr
    fill_arr = counts_arr.copy()
    cdef cnp.int64_t[::1] fill = fill_arr
    for e in range(m):
        p = freqs[e]
        k0 = -((-k_min) // p) * p
        for k in range(k0, k_max + 1, p):
            edges[fill[k - k_min]] = <cnp.int32_t>e
            fill[k - k_min] += 1
    return counts_arr, edges_arr


def run_dp(long n, long src, long k_min, long k_max, double log_gamma,
           powers, eu, ev, elen, edup, bstarts, bedges):
    """Run the budget DP; returns (B, relaxation log arrays, counters)."""
    cdef long W = k_max - k_min + 1
    cdef double inv_lg = 1.0 / log_gamma

    cdef cnp.float64_t[::1] powersV = np.ascontiguousarray(powers, dtype=np.float64)
    cdef cnp.int32_t[::1] euV = np.ascontiguousarray(eu, dtype=np.int32)
    cdef cnp.int32_t[::1] evV = np.ascontiguousarray(ev, dtype=np.int32)
    cdef cnp.float64_t[::1] elenV = np.ascontiguousarray(elen, dtype=np.float64)
    cdef cnp.float64_t[::1] edupV = np.ascontiguousarray(edup, dtype=np.float64)
    cdef cnp.int64_t[::1] bsV = np.ascontiguousarray(bstarts, dtype=np.int64)
    cdef cnp.int32_t[::1] beV = np.ascontiguousarray(bedges, dtype=np.int32)

    B_arr = np.full((W, n), np.inf, dtype=np.float64)
    cdef cnp.float64_t[:, ::1] B = B_arr
    B[0, src] = 0.0

    cdef long cap = 1024
    rec_v_arr = np.empty(cap, dtype=np.int32)
    rec_col_arr = np.empty(cap, dtype=np.int32)
    rec_pu_arr = np.empty(cap, dtype=np.int32)
    rec_pe_arr = np.empty(cap, dtype=np.int32)
    rec_pk_arr = np.empty(cap, dtype=np.int32)
    cdef cnp.int32_t[::1] rec_v = rec_v_arr
    cdef cnp.int32_t[::1] rec_col = rec_col_arr
    cdef cnp.int32_t[::1] rec_pu = rec_pu_arr
    cdef cnp.int32_t[::1] rec_pe = rec_pe_arr
    cdef cnp.int32_t[::1] rec_pk = rec_pk_arr
    cdef long used = 0

    cdef long col, k, idx, e, u, j, tgt_v
    cdef long inspections = 0
    cdef double pk, x, r, f, ar, tol, d, cost, cand

    for col in range(W):
        if col:
            memcpy(&B[col, 0], &B[col - 1, 0], n * sizeof(double))
        k = k_min + col
        pk = powersV[col]
        for idx in range(bsV[col], bsV[col + 1]):
            e = beV[idx]
            inspections += 1
            x = pk - edupV[e]
            if x < 0.0:
                continue
            if x == 0.0:
                j = k_min - 1
            else:
                r = log(x) * inv_lg
                f = floor(r + 0.5)
                ar = r if r >= 0.0 else -r
                tol = SNAP * (ar if ar > 1.0 else 1.0)
                d = r - f
                if (d if d >= 0.0 else -d) <= tol:
                    j = <long>f
                else:
                    j = <long>floor(r)
                if j > k - 1:
                    j = k - 1
            u = euV[e]
            if j < k_min:
                cost = 0.0 if u == src else INFINITY
            else:
                cost = B[j - k_min, u]
            if cost == INFINITY:
                continue
            cand = cost + elenV[e]
            tgt_v = evV[e]
            if cand < B[col, tgt_v]:
                B[col, tgt_v] = cand
                if used == cap:
                    cap *= 2
                    rec_v_arr = _grow(rec_v_arr, cap)
                    rec_col_arr = _grow(rec_col_arr, cap)
                    rec_pu_arr = _grow(rec_pu_arr, cap)
                    rec_pe_arr = _grow(rec_pe_arr, cap)
                    rec_pk_arr = _grow(rec_pk_arr, cap)
                    rec_v = rec_v_arr
                    rec_col = rec_col_arr
                    rec_pu = rec_pu_arr
                    rec_pe = rec_pe_arr
                    rec_pk = rec_pk_arr
                rec_v[used] = <cnp.int32_t>tgt_v
                rec_col[used] = <cnp.int32_t>col
                rec_pu[used] = <cnp.int32_t>u
                rec_pe[used] = <cnp.int32_t>e
                rec_pk[used] = <cnp.int32_t>j
                used += 1

    recs = (rec_v_arr[:used].copy(), rec_col_arr[:used].copy(),
            rec_pu_arr[:used].copy(), rec_pe_arr[:used].copy(),
            rec_pk_arr[:used].copy())
    return B_arr, recs, inspections, used


cdef _grow(arr, long cap):
    out = np.empty(cap, dtype=np.int32)
    out[:arr.shape[0]] = arr
    return out
