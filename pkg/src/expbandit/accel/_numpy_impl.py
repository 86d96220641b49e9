"""Pure-numpy implementations of the hot pairwise kernels.

Reference backend: always available, used when the env flag
``EXPBANDIT_BACKEND=numpy`` is set or numba is not importable.
"""

import numpy as np


def rbf_cross(u, v, gamma):
    """exp(-gamma * ||u_i - v_j||^2) for all row pairs, shape (n, m)."""
    u2 = np.einsum("ij,ij->i", u, u)
    v2 = np.einsum("ij,ij->i", v, v)
    d2 = u2[:, None] + v2[None, :] - 2.0 * (u @ v.T)
    np.maximum(d2, 0.0, out=d2)
    return np.exp(-gamma * d2)


def linear_cross(u, v):
    """Dot products u_i . v_j for all row pairs, shape (n, m)."""
    return u @ v.T


def jaccard_cross(a, b):
    """Jaccard similarity between 0-1 membership rows; (all-zero, all-zero)
    pairs score 1 by the empty-set convention."""
    af = a.astype(np.float64)
    bf = b.astype(np.float64)
    inter = af @ bf.T
    union = af.sum(axis=1)[:, None] + bf.sum(axis=1)[None, :] - inter
    out = np.ones_like(inter)
    np.divide(inter, union, out=out, where=union > 0)
    return out


def kendall_cross(p, q):
    """Fraction of concordant index pairs between rank rows p_i and q_j.

    With S_x = sign(x[i] - x[j]) the sum M = <S_p, S_q> counts each
    unordered pair twice as +1 (concordant) or -1 (discordant), so the
    concordant count is M/4 + N/2 for N = d(d-1)/2 total pairs.
    """
    d = p.shape[1]
    n_pairs = d * (d - 1) // 2
    sp = np.sign(p[:, :, None] - p[:, None, :]).astype(np.float64)
    sq = np.sign(q[:, :, None] - q[:, None, :]).astype(np.float64)
    m = np.einsum("aij,bij->ab", sp, sq)
    return m / (4.0 * n_pairs) + 0.5


def lcs_batch(gt, preds, lens):
    """Longest-common-subsequence length of gt against each padded pred row."""
    m = gt.shape[0]
    out = np.zeros(preds.shape[0], dtype=np.int64)
    for r in range(preds.shape[0]):
        n = int(lens[r])
        prev = [0] * (n + 1)
        for i in range(1, m + 1):
            cur = [0] * (n + 1)
            gi = gt[i - 1]
            for j in range(1, n + 1):
                if gi == preds[r, j - 1]:
                    cur[j] = prev[j - 1] + 1
                else:
                    cur[j] = cur[j - 1] if cur[j - 1] >= prev[j] else prev[j]
            prev = cur
        out[r] = prev[n]
    return out
