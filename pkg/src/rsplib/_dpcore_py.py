"""Pure-Python twin of the compiled budget-DP kernel.

Selected at import time when the extension is unavailable (or forced via
RSP_FORCE_PYTHON=1).  Every floating-point operation appears in the same
order as in the compiled version, so the two produce bit-identical tables.
"""

from __future__ import annotations

import math

import numpy as np

#: Relative tolerance when snapping a real log to the integer exponent grid.
SNAP = 1e-9


def build_buckets(k_min: int, k_max: int, pi) -> tuple[np.ndarray, np.ndarray]:
    """CSR schedule: bucket[col] = edges whose frequency divides k_min + col."""
    W = k_max - k_min + 1
    freqs = [int(p) for p in pi]
    counts = [0] * (W + 1)
    for p in freqs:
        k0 = -((-k_min) // p) * p
        for k in range(k0, k_max + 1, p):
            counts[k - k_min + 1] += 1
    for col in range(W):
        counts[col + 1] += counts[col]
    edges = [0] * counts[W]
    fill = counts[:]
    for e, p in enumerate(freqs):
        k0 = -((-k_min) // p) * p
        for k in range(k0, k_max + 1, p):
            edges[fill[k - k_min]] = e
            fill[k - k_min] += 1
    return (np.asarray(counts, dtype=np.int64), np.asarray(edges, dtype=np.int32))


def run_dp(n: int, src: int, k_min: int, k_max: int, log_gamma: float,
           powers, eu, ev, elen, edup, bstarts, bedges):
    """Run the budget DP; returns (B, relaxation log arrays, counters).

    B[col, t] = min length of a path reaching t whose rounded delay fits in
    budget (1+eps')^(k_min+col).  The relaxation log carries one record per
    improvement: (vertex, col, pred vertex, pred edge, pred budget index).
    """
    W = k_max - k_min + 1
    INF = math.inf
    log = math.log
    floor = math.floor
    inv_lg = 1.0 / log_gamma

    powersL = [float(x) for x in powers]
    euL = [int(x) for x in eu]
    evL = [int(x) for x in ev]
    elenL = [float(x) for x in elen]
    edupL = [float(x) for x in edup]
    bs = [int(x) for x in bstarts]
    be = [int(x) for x in bedges]

    B = [INF] * (W * n)
    B[src] = 0.0
    rec_v: list[int] = []
    rec_col: list[int] = []
    rec_pu: list[int] = []
    rec_pe: list[int] = []
    rec_pk: list[int] = []
    inspections = 0

    for col in range(W):
        base = col * n
        if col:
            B[base:base + n] = B[base - n:base]
        k = k_min + col
        pk = powersL[col]
        for idx in range(bs[col], bs[col + 1]):
            e = be[idx]
            inspections += 1
            x = pk - edupL[e]
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
                    j = int(f)
                else:
                    j = int(floor(r))
                if j > k - 1:
                    j = k - 1
            u = euL[e]
            if j < k_min:
                cost = 0.0 if u == src else INF
            else:
                cost = B[(j - k_min) * n + u]
            if cost == INF:
                continue
            cand = cost + elenL[e]
            tgt = base + evL[e]
            if cand < B[tgt]:
                B[tgt] = cand
                rec_v.append(evL[e])
                rec_col.append(col)
                rec_pu.append(u)
                rec_pe.append(e)
                rec_pk.append(j)

    Barr = np.asarray(B, dtype=np.float64).reshape(W, n)
    recs = (np.asarray(rec_v, dtype=np.int32), np.asarray(rec_col, dtype=np.int32),
            np.asarray(rec_pu, dtype=np.int32), np.asarray(rec_pe, dtype=np.int32),
            np.asarray(rec_pk, dtype=np.int32))
    return Barr, recs, inspections, len(rec_v)
