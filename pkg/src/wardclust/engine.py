"""Agglomerative drivers: stored-dissimilarity naive loop and NN-chain."""
from __future__ import annotations

import heapq
import math

import numpy as np

from . import kernels
from .core import (Dendrogram, DissimilarityMatrix, HeightScale, LinkageMethod, MergeStep,
                   ScaleError)

NON_WARD_WARNING = ("NON-WARD: {method} applied to {scale}-scale dissimilarities; "
                    "the result is a well-defined hierarchy but does not minimise the Ward criterion")


def _check_inputs(dissim: DissimilarityMatrix, method: LinkageMethod, force: bool):
    if dissim.n < 2:
        raise ValueError(f"need at least 2 observations, got {dissim.n}")
    want = method.required_scale
    if want is not None and dissim.scale is not want and not force:
        raise ScaleError(
            f"{method.value} expects {want.value}-scale input but got {dissim.scale.value}; "
            f"square or root the dissimilarities, or force the scale to reproduce the non-Ward variant")


def _masses(masses, n):
    if masses is None:
        return np.ones(n)
    w = np.asarray(masses, dtype=float).reshape(-1)
    if w.shape[0] != n or not np.all(w > 0) or not np.all(np.isfinite(w)):
        raise ValueError("masses must be n finite positive values")
    return w


def _metadata(dissim, method, force, algorithm, backend):
    meta = {
        "method": method.value,
        "input_scale": dissim.scale.value,
        "algorithm": algorithm,
        "backend": backend,
        "forced_scale": bool(force and method.required_scale not in (None, dissim.scale)),
        "transforms": [],
    }
    if meta["forced_scale"]:
        meta["warning"] = NON_WARD_WARNING.format(method=method.value, scale=dissim.scale.value)
    meta["ward"] = method.is_ward and not meta["forced_scale"]
    return meta


def _relabel(n, order, slot_a, slot_b, heights, sizes):
    """Turn slot-indexed merges into node-id steps, following ``order``."""
    node = list(range(n))
    steps = []
    for t, k in enumerate(order):
        a, b = int(slot_a[k]), int(slot_b[k])
        steps.append(MergeStep(node[a], node[b], float(heights[k]), float(sizes[k])))
        node[a] = n + t
    return steps


def _height_order(n, slot_a, slot_b, heights):
    """Merges sorted by height, ties in chain order, never a parent before its child."""
    m = len(heights)
    last = [-1] * n
    children = [[] for _ in range(m)]
    pending = [0] * m
    for t in range(m):
        for s in (slot_a[t], slot_b[t]):
            dep = last[s]
            if dep >= 0:
                children[dep].append(t)
                pending[t] += 1
        last[slot_a[t]] = t
    heap = [(heights[t], t) for t in range(m) if pending[t] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, t = heapq.heappop(heap)
        order.append(t)
        for c in children[t]:
            pending[c] -= 1
            if pending[c] == 0:
                heapq.heappush(heap, (heights[c], c))
    return order


def _run(dissim, method, masses, force, backend, algorithm):
    method = LinkageMethod.parse(method)
    _check_inputs(dissim, method, force)
    n = dissim.n
    w = _masses(masses, n)
    impl = kernels.get(backend)
    fn = impl.naive if algorithm == "naive" else impl.nnchain
    a, b, h, s = fn(dissim.entries, n, method.code, w)
    if algorithm == "naive":
        order = range(n - 1)
    else:
        order = _height_order(n, a.tolist(), b.tolist(), h.tolist())
    steps = _relabel(n, order, a, b, h, s)
    name = backend or kernels.DEFAULT_BACKEND
    leaf_masses = None if np.all(w == 1.0) else tuple(w)
    return Dendrogram(n, tuple(steps), method, HeightScale.RAW, labels=dissim.labels,
                      metadata=_metadata(dissim, method, force, algorithm, name), masses=leaf_masses)


def agglomerate_naive(dissim: DissimilarityMatrix, method, masses=None, *, force: bool = False,
                      backend=None) -> Dendrogram:
    """Merge the globally closest pair at every step.

    Ties between equal minima go to the lexicographically smallest
    ``(smaller node id, larger node id)`` pair. Heights are the raw
    dissimilarity values at which merges happen.

    Parameters
    ----------
    dissim : DissimilarityMatrix
        Must be on the scale the method expects (``ward.D``, centroid and
        median: squared; ``ward.D2``: plain) unless ``force`` is set.
    method : LinkageMethod or str
    masses : array_like, optional
        Leaf masses, default 1.
    force : bool
        Accept a scale mismatch; the dendrogram metadata then carries a
        non-Ward warning.
    backend : {"compiled", "python"}, optional
    """
    return _run(dissim, method, masses, force, backend, "naive")


def agglomerate_nnchain(dissim: DissimilarityMatrix, method, masses=None, *, force: bool = False,
                        backend=None) -> Dendrogram:
    """Nearest-neighbour-chain agglomeration, O(n^2) time.

    Only valid for reducible methods. The merges found along the chain are
    re-sorted into height order so the result is laid out like the output
    of :func:`agglomerate_naive`.
    """
    method = LinkageMethod.parse(method)
    if not method.reducible:
        raise ValueError(f"{method.value} is not reducible; the NN-chain algorithm does not apply")
    return _run(dissim, method, masses, force, backend, "nnchain")


def agglomerate(dissim, method, masses=None, *, algorithm="nnchain", force=False, backend=None):
    method = LinkageMethod.parse(method)
    if algorithm == "nnchain" and not method.reducible:
        algorithm = "naive"
    if algorithm not in ("naive", "nnchain"):
        raise ValueError(f"unknown algorithm {algorithm!r}")
    return _run(dissim, method, masses, force, backend, algorithm)


def detect_inversions(dend: Dendrogram, tol: float = 0.0) -> list:
    """Steps whose height is below the height of one of their child clusters."""
    out = []
    n = dend.n
    for t, s in enumerate(dend.steps):
        for c in (s.left, s.right):
            if c >= n and dend.steps[c - n].height > s.height + tol:
                out.append(t)
                break
    return out


def transform_heights(dend: Dendrogram, op: str) -> Dendrogram:
    """Square-root raw heights, or square sqrt-transformed ones back."""
    if op == "sqrt":
        if dend.height_scale is not HeightScale.RAW:
            raise ValueError("heights are already square-rooted")
        if any(s.height < 0 for s in dend.steps):
            raise ValueError("cannot square-root a negative height")
        f, scale = math.sqrt, HeightScale.SQRT
    elif op == "square":
        if dend.height_scale is not HeightScale.SQRT:
            raise ValueError("only square-rooted heights can be squared back")
        f, scale = (lambda v: v * v), HeightScale.RAW
    else:
        raise ValueError(f"op must be 'sqrt' or 'square', not {op!r}")
    steps = tuple(MergeStep(s.left, s.right, f(s.height), s.size) for s in dend.steps)
    meta = dict(dend.metadata)
    meta["transforms"] = list(meta.get("transforms", [])) + [f"{op}_heights"]
    return Dendrogram(dend.n, steps, dend.method, scale, order=dend.order, labels=dend.labels,
                      metadata=meta, masses=dend.masses)
