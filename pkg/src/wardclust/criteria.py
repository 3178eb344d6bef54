"""Sum-of-squares quantities: ESS, variance, inertia, Huygens split, Ward minimand."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DataMatrix, DissimilarityMatrix, Partition, Scale, ScaleError, condensed_index

DEFAULT_RTOL = 1e-10


def _members(members) -> np.ndarray:
    idx = np.unique(np.asarray(list(members) if not isinstance(members, np.ndarray) else members, dtype=int))
    if idx.size == 0:
        raise ValueError("member set is empty")
    return idx


def centroid(data: DataMatrix, members) -> np.ndarray:
    idx = _members(members)
    w = data.masses[idx]
    return w @ data.values[idx] / w.sum()


def error_sum_of_squares(data: DataMatrix, members) -> float:
    """Sum of squared Euclidean deviations from the (mass-weighted) centroid."""
    idx = _members(members)
    dev = data.values[idx] - centroid(data, idx)
    return float(np.einsum("ij,ij->", dev, dev))


def cluster_variance(data: DataMatrix, members, kind: str = "population") -> float:
    idx = _members(members)
    ess = error_sum_of_squares(data, idx)
    if kind == "population":
        return ess / idx.size
    if kind == "sample":
        if idx.size < 2:
            raise ValueError("sample variance needs at least two members")
        return ess / (idx.size - 1)
    raise ValueError(f"kind must be 'population' or 'sample', not {kind!r}")


def inertia(data: DataMatrix, members) -> float:
    """Mass-weighted squared deviations about the mass-weighted centroid."""
    idx = _members(members)
    dev = data.values[idx] - centroid(data, idx)
    return float(data.masses[idx] @ np.einsum("ij,ij->i", dev, dev))


@dataclass(frozen=True)
class Decomposition:
    total: float
    between: float
    within: float

    def residual(self) -> float:
        return self.total - self.between - self.within

    def holds(self, rtol: float = DEFAULT_RTOL) -> bool:
        return abs(self.residual()) <= rtol * max(1.0, abs(self.total))


def huygens_decomposition(data: DataMatrix, partition: Partition) -> Decomposition:
    """Split total mass-weighted sum of squares into between and within parts.

    With unit masses every term is an ordinary error sum of squares.
    """
    a = partition.assignment
    if a.shape[0] != data.n:
        raise ValueError(f"partition covers {a.shape[0]} observations, data has {data.n}")
    every = np.arange(data.n)
    g = centroid(data, every)
    total = inertia(data, every)
    within = 0.0
    between = 0.0
    for q in range(partition.k):
        idx = partition.members(q)
        within += inertia(data, idx)
        diff = centroid(data, idx) - g
        between += data.masses[idx].sum() * float(diff @ diff)
    return Decomposition(total, between, within)


def ess_via_pairwise(dissim: DissimilarityMatrix, members) -> float:
    """ESS from squared pairwise distances: sum over pairs divided by cluster size."""
    if dissim.scale is not Scale.SQUARED:
        raise ScaleError("ess_via_pairwise needs squared dissimilarities")
    idx = _members(members)
    if idx[-1] >= dissim.n:
        raise IndexError(f"member {idx[-1]} out of range for n={dissim.n}")
    total = 0.0
    for a in range(idx.size):
        for b in range(a + 1, idx.size):
            total += dissim.entries[condensed_index(int(idx[a]), int(idx[b]), dissim.n)]
    return total / idx.size


def ward_minimand(data: DataMatrix, members1, members2) -> float:
    """Increase in within-cluster sum of squares caused by merging two clusters.

    ``m1*m2/(m1+m2) * ||c1 - c2||**2`` with masses summed per cluster.
    """
    a, b = _members(members1), _members(members2)
    if np.intersect1d(a, b).size:
        raise ValueError("member sets overlap")
    m1, m2 = data.masses[a].sum(), data.masses[b].sum()
    diff = centroid(data, a) - centroid(data, b)
    return float(m1 * m2 / (m1 + m2) * (diff @ diff))


def minimand_from_centroids(c1, m1: float, c2, m2: float) -> float:
    diff = np.asarray(c1, dtype=float) - np.asarray(c2, dtype=float)
    return float(m1 * m2 / (m1 + m2) * (diff @ diff))
