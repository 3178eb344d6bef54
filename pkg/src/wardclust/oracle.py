"""Stored-data ground truth for the Ward criterion.

The greedy agglomerator here never touches a dissimilarity matrix or the
Lance-Williams recurrence: every candidate merge cost is computed from
cluster centroids and masses.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analysis import compare_heights, topology_equal
from .core import DataMatrix, Dendrogram, HeightScale, LinkageMethod, MergeStep

MAX_ORACLE_N = 2000


@dataclass(frozen=True)
class OracleStep:
    left: int
    right: int
    delta_ess: float
    criterion: float
    centroid: np.ndarray
    size: float


@dataclass(frozen=True)
class OracleTrace:
    n: int
    steps: tuple
    masses: tuple = None

    @property
    def delta_ess(self) -> np.ndarray:
        return np.array([s.delta_ess for s in self.steps])

    def to_dendrogram(self, method="ward.D") -> Dendrogram:
        """Dendrogram carrying engine-convention heights (2*dESS, rooted for ward.D2)."""
        method = LinkageMethod.parse(method)
        f = (lambda v: math.sqrt(2.0 * v)) if method is LinkageMethod.WARD_D2 else (lambda v: 2.0 * v)
        steps = tuple(MergeStep(s.left, s.right, f(s.delta_ess), s.size) for s in self.steps)
        return Dendrogram(self.n, steps, method, HeightScale.RAW, metadata={"source": "oracle"},
                          masses=self.masses)


def greedy_ess_agglomerate(data: DataMatrix, max_n: int = MAX_ORACLE_N) -> OracleTrace:
    """Merge, at every step, the pair whose union adds least to the total ESS.

    The merge cost is ``m1*m2/(m1+m2) * ||c1-c2||**2``; the merged centroid
    is the mass-weighted mean of the two. Ties go to the smallest
    ``(smaller node id, larger node id)`` pair.
    """
    n = data.n
    if n < 2:
        raise ValueError(f"need at least 2 observations, got {n}")
    if n > max_n:
        raise ValueError(f"oracle is O(n^3 p); n={n} exceeds max_n={max_n}")
    cent = data.values.astype(float).copy()
    mass = data.masses.astype(float).copy()
    node = np.arange(n)
    alive = np.ones(n, dtype=bool)

    cost = np.empty((n, n))
    for i in range(n):
        dd = cent - cent[i]
        cost[i] = (mass[i] * mass / (mass[i] + mass)) * np.einsum("ij,ij->i", dd, dd)
    cost[np.diag_indices(n)] = np.inf

    steps = []
    for t in range(n - 1):
        live = np.flatnonzero(alive)
        sub = cost[np.ix_(live, live)]
        best = sub.min()
        ii, jj = np.nonzero(np.triu(sub == best, k=1))
        pick = 0
        if ii.size > 1:
            na, nb = node[live[ii]], node[live[jj]]
            pick = np.lexsort((np.maximum(na, nb), np.minimum(na, nb)))[0]
        i, j = live[ii[pick]], live[jj[pick]]

        m = mass[i] + mass[j]
        c = (mass[i] * cent[i] + mass[j] * cent[j]) / m
        # between-part of the merged cluster: the ESS it gains over its halves
        di, dj = cent[i] - c, cent[j] - c
        delta = float(mass[i] * (di @ di) + mass[j] * (dj @ dj))
        steps.append(OracleStep(int(node[i]), int(node[j]), delta, float(best), c.copy(), float(m)))

        cent[i], mass[i], node[i] = c, m, n + t
        alive[j] = False
        cost[j, :] = np.inf
        cost[:, j] = np.inf
        others = np.flatnonzero(alive)
        others = others[others != i]
        if others.size:
            dd = cent[others] - c
            row = (m * mass[others] / (m + mass[others])) * np.einsum("ij,ij->i", dd, dd)
            cost[i, others] = row
            cost[others, i] = row
    leaf_masses = None if np.all(data.masses == 1.0) else tuple(float(w) for w in data.masses)
    return OracleTrace(n, tuple(steps), leaf_masses)


@dataclass(frozen=True)
class EngineComparison:
    max_relative_deviation: float
    topology_equal: bool

    def ok(self, rtol: float = 1e-9) -> bool:
        return self.topology_equal and self.max_relative_deviation < rtol


def compare_with_engine(trace: OracleTrace, dend: Dendrogram) -> EngineComparison:
    """Check an engine dendrogram against the oracle.

    ``ward.D`` raw heights are compared with ``2*dESS``; ``ward.D2`` heights
    (or square-rooted ``ward.D`` heights) with ``sqrt(2*dESS)``.
    """
    if trace.n != dend.n:
        raise ValueError(f"leaf-count mismatch: oracle {trace.n}, dendrogram {dend.n}")
    rooted = dend.method is LinkageMethod.WARD_D2 or dend.height_scale is HeightScale.SQRT
    ref = trace.to_dendrogram(LinkageMethod.WARD_D2 if rooted else LinkageMethod.WARD_D)
    if not topology_equal(ref, dend):
        return EngineComparison(math.inf, False)
    return EngineComparison(compare_heights(ref, dend), True)
