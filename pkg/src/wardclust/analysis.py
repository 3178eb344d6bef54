"""Dendrogram post-processing: cophenetic matrices, ultrametricity, comparisons."""
from __future__ import annotations

import math

import numpy as np

from .core import Dendrogram, DissimilarityMatrix, LinkageMethod, Scale
from . import linkage as lw

# A cophenetic matrix is an ordinary condensed dissimilarity matrix whose
# entries are lowest-common-ancestor heights.
CopheneticMatrix = DissimilarityMatrix


def node_leaves(dend: Dendrogram) -> list:
    """Leaf set of every node, indexed by node id."""
    n = dend.n
    sets = [frozenset((i,)) for i in range(n)]
    for s in dend.steps:
        sets.append(sets[s.left] | sets[s.right])
    return sets


def cophenetic_matrix(dend: Dendrogram) -> CopheneticMatrix:
    from .engine import detect_inversions

    bad = detect_inversions(dend)
    if bad:
        raise ValueError(f"dendrogram has inversions at steps {bad}; cophenetic heights are not ultrametric")
    n = dend.n
    m = np.zeros((n, n))
    members = [[i] for i in range(n)] + [None] * (n - 1)
    for t, s in enumerate(dend.steps):
        a, b = members[s.left], members[s.right]
        m[np.ix_(a, b)] = s.height
        m[np.ix_(b, a)] = s.height
        members[n + t] = a + b
        members[s.left] = members[s.right] = None
    iu, ju = np.triu_indices(n, k=1)
    return DissimilarityMatrix(n, m[iu, ju], Scale.PLAIN, dend.labels)


def is_ultrametric(m: DissimilarityMatrix, tol: float = 0.0):
    """Check ``d(i,j) <= max(d(i,k), d(k,j)) + tol`` for all triples.

    Returns ``(ok, triple)`` where ``triple`` is the first violating
    ``(i, j, k)`` in lexicographic order (``i < j``), or None.
    """
    n = m.n
    if n < 3:
        return True, None
    d = m.to_square()
    for i in range(n - 1):
        # viol[j, k]: d(i,j) > max(d(i,k), d(k,j)) + tol
        viol = d[i][:, None] > np.maximum(d[i][None, :], d) + tol
        viol[: i + 1, :] = False
        hits = np.argwhere(viol)
        if hits.size:
            j, k = hits[0]
            return False, (i, int(j), int(k))
    return True, None


def cophenetic_correlation(original: DissimilarityMatrix, coph: DissimilarityMatrix) -> float:
    if original.n != coph.n:
        raise ValueError(f"size mismatch: {original.n} vs {coph.n}")
    x, y = original.entries, coph.entries
    if x.size < 2 or np.ptp(x) == 0 or np.ptp(y) == 0:
        raise ValueError("cophenetic correlation needs variation in both matrices")
    x = x - x.mean()
    y = y - y.mean()
    return float((x @ y) / math.sqrt((x @ x) * (y @ y)))


def clusters(dend: Dendrogram) -> list:
    """Leaf set created at each merge step, in step order."""
    return node_leaves(dend)[dend.n:]


def topology_equal(a: Dendrogram, b: Dendrogram) -> bool:
    """Same nested leaf sets, ignoring child order and heights."""
    if a.n != b.n:
        raise ValueError(f"leaf-count mismatch: {a.n} vs {b.n}")
    return set(clusters(a)) == set(clusters(b))


_MAPS = {
    "identity": lambda v: v,
    "sqrt": math.sqrt,
    "square": lambda v: v * v,
}


def compare_heights(a: Dendrogram, b: Dendrogram, map: str = "identity") -> float:
    """Max relative deviation between ``map(a-height)`` and ``b-height``.

    Steps are paired by the leaf set they create, so permuted equal-height
    merges do not count as differences.
    """
    if map not in _MAPS:
        raise ValueError(f"map must be one of {sorted(_MAPS)}")
    if not topology_equal(a, b):
        raise ValueError("dendrograms differ in topology; heights cannot be paired")
    f = _MAPS[map]
    hb = {c: s.height for c, s in zip(clusters(b), b.steps)}
    worst = 0.0
    for c, s in zip(clusters(a), a.steps):
        x, y = f(s.height), hb[c]
        denom = max(abs(x), abs(y))
        if denom > 0:
            worst = max(worst, abs(x - y) / denom)
    return worst


def intermediate_dissimilarities(dissim: DissimilarityMatrix, method, n_merges: int, masses=None):
    """Inter-cluster dissimilarities after the first ``n_merges`` greedy merges.

    A slow scalar re-run of the stored-dissimilarity algorithm, for
    inspecting the Lance-Williams matrix mid-run. Returns the surviving
    clusters' leaf sets and the matrix between them.
    """
    method = LinkageMethod.parse(method)
    d = dissim.to_square()
    w = list(np.ones(dissim.n) if masses is None else masses)
    alive = list(range(dissim.n))
    members = {i: frozenset((i,)) for i in alive}
    for _ in range(n_merges):
        best = None
        for x in range(len(alive)):
            for y in range(x + 1, len(alive)):
                i, j = alive[x], alive[y]
                if best is None or d[i, j] < best[0]:
                    best = (d[i, j], i, j)
        _, i, j = best
        for k in alive:
            if k not in (i, j):
                d[i, k] = d[k, i] = lw.update(method, d[i, k], d[j, k], d[i, j], w[i], w[j], w[k])
        w[i] += w[j]
        members[i] = members[i] | members.pop(j)
        alive.remove(j)
    sub = d[np.ix_(alive, alive)]
    iu, ju = np.triu_indices(len(alive), k=1)
    return [members[i] for i in alive], DissimilarityMatrix(len(alive), sub[iu, ju], dissim.scale)


def triangle_violation(m: DissimilarityMatrix, tol: float = 0.0):
    """First ``(i, j, k)`` with ``d(i,j) > d(i,k) + d(k,j) + tol``, or None."""
    d = m.to_square()
    for i in range(m.n - 1):
        viol = d[i][:, None] > d[i][None, :] + d + tol
        viol[: i + 1, :] = False
        hits = np.argwhere(viol)
        if hits.size:
            return i, int(hits[0][0]), int(hits[0][1])
    return None
