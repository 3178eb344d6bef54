"""Pure-Python (numpy) agglomeration kernels.

Same contract as the compiled ``_ckernels`` module. Both kernels take a
condensed dissimilarity vector, the leaf count, a method code and leaf
masses, and return ``(slot_a, slot_b, height, size)`` arrays in the order
merges were performed. Slots are leaf indices; the merged cluster keeps the
smaller slot ``slot_a`` and ``slot_b`` dies.

Method codes: 0 ward.D, 1 ward.D2, 2 single, 3 complete, 4 average,
5 centroid, 6 median.
"""
import numpy as np

ROOT_CLAMP = 1e-12


class KernelError(ValueError):
    pass


def _square(d, n):
    m = np.zeros((n, n))
    iu, ju = np.triu_indices(n, k=1)
    m[iu, ju] = d
    m[ju, iu] = d
    return m


def _update(code, d_ik, d_jk, d_ij, w_i, w_j, w_k):
    """Vectorised over k (d_ik, d_jk, w_k are arrays)."""
    if code == 0:
        return ((w_i + w_k) * d_ik + (w_j + w_k) * d_jk - w_k * d_ij) / (w_i + w_j + w_k)
    if code == 1:
        sq = ((w_i + w_k) * (d_ik * d_ik) + (w_j + w_k) * (d_jk * d_jk) - w_k * (d_ij * d_ij)) / (w_i + w_j + w_k)
        neg = sq < 0.0
        if neg.any():
            scale = np.maximum(np.maximum(d_ik, d_jk), d_ij) ** 2
            if np.any(sq[neg] < -ROOT_CLAMP * np.maximum(scale[neg], 1.0)):
                raise KernelError("negative value under the ward.D2 root: input is not Euclidean")
            sq = np.where(neg, 0.0, sq)
        return np.sqrt(sq)
    if code == 2:
        return 0.5 * d_ik + 0.5 * d_jk + 0.0 * d_ij + -0.5 * np.abs(d_ik - d_jk)
    if code == 3:
        return 0.5 * d_ik + 0.5 * d_jk + 0.0 * d_ij + 0.5 * np.abs(d_ik - d_jk)
    if code == 4:
        s = w_i + w_j
        return w_i / s * d_ik + w_j / s * d_jk + 0.0 * d_ij + 0.0 * np.abs(d_ik - d_jk)
    if code == 5:
        s = w_i + w_j
        return w_i / s * d_ik + w_j / s * d_jk + (-w_i * w_j / (s * s)) * d_ij + 0.0 * np.abs(d_ik - d_jk)
    if code == 6:
        return 0.5 * d_ik + 0.5 * d_jk + -0.25 * d_ij + 0.0 * np.abs(d_ik - d_jk)
    raise KernelError(f"unknown method code {code}")


def naive(d, n, code, masses):
    """Global-minimum agglomeration; ties go to the smallest node-id pair."""
    d = np.asarray(d, dtype=float)
    m = _square(d, n)
    np.fill_diagonal(m, np.inf)
    size = np.array(masses, dtype=float)
    node = np.arange(n)
    alive = np.ones(n, dtype=bool)
    out_a = np.empty(n - 1, dtype=np.int64)
    out_b = np.empty(n - 1, dtype=np.int64)
    out_h = np.empty(n - 1)
    out_s = np.empty(n - 1)
    for t in range(n - 1):
        live = np.flatnonzero(alive)
        sub = m[np.ix_(live, live)]
        h = sub.min()
        ii, jj = np.nonzero(np.triu(sub == h, k=1))
        if ii.size > 1:
            na, nb = node[live[ii]], node[live[jj]]
            lo, hi = np.minimum(na, nb), np.maximum(na, nb)
            pick = np.lexsort((hi, lo))[0]
        else:
            pick = 0
        i, j = live[ii[pick]], live[jj[pick]]
        others = live[(live != i) & (live != j)]
        if others.size:
            new = _update(code, m[i, others], m[j, others], m[i, j], size[i], size[j], size[others])
            m[i, others] = new
            m[others, i] = new
        m[j, :] = np.inf
        m[:, j] = np.inf
        alive[j] = False
        size[i] = size[i] + size[j]
        node[i] = n + t
        out_a[t], out_b[t], out_h[t], out_s[t] = i, j, h, size[i]
    return out_a, out_b, out_h, out_s


def nnchain(d, n, code, masses):
    """Nearest-neighbour chain; merges come out in chain order, not height order."""
    d = np.asarray(d, dtype=float)
    m = _square(d, n)
    np.fill_diagonal(m, np.inf)
    size = np.array(masses, dtype=float)
    alive = np.ones(n, dtype=bool)
    out_a = np.empty(n - 1, dtype=np.int64)
    out_b = np.empty(n - 1, dtype=np.int64)
    out_h = np.empty(n - 1)
    out_s = np.empty(n - 1)
    chain = []
    lowest = 0
    for t in range(n - 1):
        if not chain:
            while not alive[lowest]:
                lowest += 1
            chain.append(lowest)
        while True:
            x = chain[-1]
            row = m[x]
            y = int(np.argmin(row))
            if len(chain) > 1:
                prev = chain[-2]
                if row[prev] <= row[y]:
                    y = prev
            if len(chain) > 1 and y == chain[-2]:
                break
            chain.append(y)
        y = chain.pop()
        x = chain.pop()
        i, j = (x, y) if x < y else (y, x)
        h = m[i, j]
        others = np.flatnonzero(alive)
        others = others[(others != i) & (others != j)]
        if others.size:
            new = _update(code, m[i, others], m[j, others], h, size[i], size[j], size[others])
            m[i, others] = new
            m[others, i] = new
        m[j, :] = np.inf
        m[:, j] = np.inf
        alive[j] = False
        size[i] = size[i] + size[j]
        out_a[t], out_b[t], out_h[t], out_s[t] = i, j, h, size[i]
    return out_a, out_b, out_h, out_s
