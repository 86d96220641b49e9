"""Numba-jitted implementations of the hot pairwise kernels.

Same contracts as ``_numpy_impl``; compiled lazily on first call.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def rbf_cross(u, v, gamma):
    n, d = u.shape
    m = v.shape[0]
    out = np.empty((n, m), dtype=np.float64)
    for i in range(n):
        for j in range(m):
            acc = 0.0
            for k in range(d):
                diff = u[i, k] - v[j, k]
                acc += diff * diff
            out[i, j] = np.exp(-gamma * acc)
    return out


@njit(cache=True)
def linear_cross(u, v):
    n, d = u.shape
    m = v.shape[0]
    out = np.empty((n, m), dtype=np.float64)
    for i in range(n):
        for j in range(m):
            acc = 0.0
            for k in range(d):
                acc += u[i, k] * v[j, k]
            out[i, j] = acc
    return out


@njit(cache=True)
def jaccard_cross(a, b):
    n, d = a.shape
    m = b.shape[0]
    out = np.empty((n, m), dtype=np.float64)
    for i in range(n):
        for j in range(m):
            inter = 0
            union = 0
            for k in range(d):
                ai = a[i, k]
                bj = b[j, k]
                if ai != 0 and bj != 0:
                    inter += 1
                if ai != 0 or bj != 0:
                    union += 1
            out[i, j] = 1.0 if union == 0 else inter / union
    return out


@njit(cache=True)
def kendall_cross(p, q):
    n, d = p.shape
    m = q.shape[0]
    n_pairs = d * (d - 1) // 2
    out = np.empty((n, m), dtype=np.float64)
    for a in range(n):
        for b in range(m):
            disc = 0
            for i in range(d):
                for j in range(i + 1, d):
                    s = (p[a, i] - p[a, j]) * (q[b, i] - q[b, j])
                    if s < 0:
                        disc += 1
            out[a, b] = 1.0 - disc / n_pairs
    return out


@njit(cache=True)
def lcs_batch(gt, preds, lens):
    m = gt.shape[0]
    rows = preds.shape[0]
    out = np.zeros(rows, dtype=np.int64)
    for r in range(rows):
        n = lens[r]
        prev = np.zeros(n + 1, dtype=np.int64)
        cur = np.zeros(n + 1, dtype=np.int64)
        for i in range(1, m + 1):
            gi = gt[i - 1]
            cur[0] = 0
            for j in range(1, n + 1):
                if gi == preds[r, j - 1]:
                    cur[j] = prev[j - 1] + 1
                elif cur[j - 1] >= prev[j]:
                    cur[j] = cur[j - 1]
                else:
                    cur[j] = prev[j]
            prev, cur = cur, prev
        out[r] = prev[n]
    return out
