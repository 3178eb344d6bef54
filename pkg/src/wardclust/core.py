"""Domain types shared by the rest of the package.

Node ids follow one convention everywhere: leaves are ``0..n-1`` and the
cluster created at merge step ``t`` (0-based) is node ``n + t``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np


class ValidationError(ValueError):
    """Raised when an input violates a type invariant.

    ``problems`` holds one message per violation.
    """

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class ScaleError(ValueError):
    """Dissimilarity scale does not match what the linkage method expects."""


class Scale(str, enum.Enum):
    PLAIN = "plain"
    SQUARED = "squared"


class HeightScale(str, enum.Enum):
    RAW = "raw"
    SQRT = "sqrt"


class LinkageMethod(str, enum.Enum):
    WARD_D = "ward.D"
    WARD_D2 = "ward.D2"
    SINGLE = "single"
    COMPLETE = "complete"
    AVERAGE = "average"
    CENTROID = "centroid"
    MEDIAN = "median"

    @classmethod
    def parse(cls, name) -> "LinkageMethod":
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("_", ".")
        aliases = {"ward.d": cls.WARD_D, "ward": cls.WARD_D, "ward1": cls.WARD_D,
                   "ward.d2": cls.WARD_D2, "ward2": cls.WARD_D2}
        if key in aliases:
            return aliases[key]
        for m in cls:
            if m.value == key:
                return m
        raise ValueError(f"unknown linkage method {name!r}")

    @property
    def code(self) -> int:
        # index used by the compiled and fallback kernels
        return _METHOD_CODES[self]

    @property
    def is_ward(self) -> bool:
        return self in (LinkageMethod.WARD_D, LinkageMethod.WARD_D2)

    @property
    def reducible(self) -> bool:
        return self not in (LinkageMethod.CENTROID, LinkageMethod.MEDIAN)

    @property
    def takes_root(self) -> bool:
        """True only for ``ward.D2``, whose update square-roots its result."""
        return self is LinkageMethod.WARD_D2

    @property
    def required_scale(self) -> Optional[Scale]:
        """Input scale the method is defined on, or None if scale-agnostic."""
        if self is LinkageMethod.WARD_D2:
            return Scale.PLAIN
        if self in (LinkageMethod.WARD_D, LinkageMethod.CENTROID, LinkageMethod.MEDIAN):
            return Scale.SQUARED
        return None


_METHOD_CODES = {
    LinkageMethod.WARD_D: 0,
    LinkageMethod.WARD_D2: 1,
    LinkageMethod.SINGLE: 2,
    LinkageMethod.COMPLETE: 3,
    LinkageMethod.AVERAGE: 4,
    LinkageMethod.CENTROID: 5,
    LinkageMethod.MEDIAN: 6,
}


def condensed_index(i: int, j: int, n: int) -> int:
    """Offset of the unordered pair ``{i, j}`` in a condensed matrix of size n."""
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"pair ({i}, {j}) out of range for n={n}")
    if i == j:
        raise ValueError(f"self-pair ({i}, {i}) has no stored entry")
    if i > j:
        i, j = j, i
    return n * i - i * (i + 1) // 2 + (j - i - 1)


def condensed_size(n: int) -> int:
    return n * (n - 1) // 2


def n_from_condensed(m: int) -> int:
    n = int(round((1 + math.sqrt(1 + 8 * m)) / 2))
    if condensed_size(n) != m:
        raise ValueError(f"length {m} is not n(n-1)/2 for any integer n")
    return n


@dataclass(frozen=True, eq=False)
class DataMatrix:
    """n observations by p attributes, with per-observation masses."""

    values: np.ndarray
    masses: Optional[np.ndarray] = None
    row_labels: Optional[Sequence[str]] = None

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim == 1:
            values = values.reshape(-1, 1)
        masses = (np.ones(values.shape[0]) if self.masses is None
                  else np.array(self.masses, dtype=float).reshape(-1))
        labels = None if self.row_labels is None else tuple(str(s) for s in self.row_labels)
        values.setflags(write=False)
        masses.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "masses", masses)
        object.__setattr__(self, "row_labels", labels)
        problems = _data_problems(values, masses, labels)
        if problems:
            raise ValidationError(problems)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]

    def dissimilarities(self, squared: bool = False) -> "DissimilarityMatrix":
        """Euclidean (or squared Euclidean) distances between rows."""
        return DissimilarityMatrix.from_data(self, squared=squared)


def _data_problems(values, masses, labels):
    problems = []
    if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 1:
        return [f"empty matrix (shape {values.shape})"]
    bad = np.argwhere(~np.isfinite(values))
    for r, c in bad:
        problems.append(f"non-finite value {values[r, c]} at row {r}, column {c}")
    if masses.shape[0] != values.shape[0]:
        problems.append(f"{masses.shape[0]} masses for {values.shape[0]} rows")
    else:
        for r in np.flatnonzero(~(masses > 0) | ~np.isfinite(masses)):
            problems.append(f"non-positive mass at row {r}")
    if labels is not None and len(labels) != values.shape[0]:
        problems.append(f"{len(labels)} row labels for {values.shape[0]} rows")
    return problems


def validate(data) -> list[str]:
    """List every invariant violation of a DataMatrix-like input.

    Accepts either a constructed :class:`DataMatrix` (always valid, returns
    ``[]``) or raw ``values`` / ``(values, masses)``. An empty list means ok.
    """
    if isinstance(data, DataMatrix):
        return []
    if isinstance(data, tuple) and len(data) == 2:
        values, masses = data
    else:
        values, masses = data, None
    values = np.asarray(values, dtype=float)
    if values.ndim == 1:
        values = values.reshape(-1, 1)
    masses = (np.ones(values.shape[0] if values.ndim == 2 else 0) if masses is None
              else np.asarray(masses, dtype=float).reshape(-1))
    return _data_problems(values, masses, None)


@dataclass(frozen=True, eq=False)
class DissimilarityMatrix:
    """Condensed upper-triangle store of pairwise dissimilarities."""

    n: int
    entries: np.ndarray
    scale: Scale = Scale.PLAIN
    labels: Optional[Sequence[str]] = None

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float).reshape(-1)
        scale = Scale(self.scale)
        n = int(self.n)
        problems = []
        if n < 1:
            problems.append(f"n must be >= 1, got {n}")
        elif entries.shape[0] != condensed_size(n):
            problems.append(f"expected {condensed_size(n)} entries for n={n}, got {entries.shape[0]}")
        for k in np.flatnonzero(~np.isfinite(entries) | (entries < 0)):
            problems.append(f"entry {k} is {entries[k]} (must be finite and >= 0)")
        if problems:
            raise ValidationError(problems)
        entries.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "scale", scale)
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))

    @classmethod
    def from_data(cls, data: DataMatrix, squared: bool = False) -> "DissimilarityMatrix":
        x = data.values
        n = x.shape[0]
        iu, ju = np.triu_indices(n, k=1)
        diff = x[iu] - x[ju]
        d2 = np.einsum("ij,ij->i", diff, diff)
        entries = d2 if squared else np.sqrt(d2)
        return cls(n, entries, Scale.SQUARED if squared else Scale.PLAIN, data.row_labels)

    @classmethod
    def from_square(cls, matrix, scale=Scale.PLAIN, labels=None, atol: float = 1e-12):
        m = np.asarray(matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValidationError([f"matrix is not square (shape {m.shape})"])
        problems = []
        for i in np.flatnonzero(np.abs(np.diag(m)) > 0):
            problems.append(f"non-zero diagonal at ({i}, {i}): {m[i, i]}")
        asym = np.argwhere(np.triu(np.abs(m - m.T) > atol, k=1))
        for i, j in asym:
            problems.append(f"asymmetric pair ({i}, {j}): {m[i, j]} != {m[j, i]}")
        if problems:
            raise ValidationError(problems)
        iu, ju = np.triu_indices(m.shape[0], k=1)
        return cls(m.shape[0], m[iu, ju], scale, labels)

    def __getitem__(self, pair) -> float:
        i, j = pair
        if i == j:
            return 0.0
        return float(self.entries[condensed_index(i, j, self.n)])

    def to_square(self) -> np.ndarray:
        out = np.zeros((self.n, self.n))
        iu, ju = np.triu_indices(self.n, k=1)
        out[iu, ju] = self.entries
        out[ju, iu] = self.entries
        return out

    def squared(self) -> "DissimilarityMatrix":
        if self.scale is Scale.SQUARED:
            raise ScaleError("matrix is already on the squared scale")
        return DissimilarityMatrix(self.n, self.entries ** 2, Scale.SQUARED, self.labels)

    def rooted(self) -> "DissimilarityMatrix":
        if self.scale is Scale.PLAIN:
            raise ScaleError("matrix is already on the plain scale")
        return DissimilarityMatrix(self.n, np.sqrt(self.entries), Scale.PLAIN, self.labels)

    def relabel_scale(self, scale) -> "DissimilarityMatrix":
        """Same numbers, different scale tag. Used to deliberately misuse a method."""
        return DissimilarityMatrix(self.n, self.entries, Scale(scale), self.labels)


@dataclass(frozen=True)
class MergeStep:
    left: int
    right: int
    height: float
    size: float


@dataclass(frozen=True, eq=False)
class Dendrogram:
    """Ordered merge steps plus a crossing-free leaf order."""

    n: int
    steps: tuple
    method: LinkageMethod
    height_scale: HeightScale = HeightScale.RAW
    order: tuple = field(default=None)
    labels: Optional[tuple] = None
    metadata: dict = field(default_factory=dict)
    masses: Optional[tuple] = None

    def __post_init__(self):
        if self.masses is not None:
            object.__setattr__(self, "masses", tuple(float(m) for m in self.masses))
        steps = tuple(s if isinstance(s, MergeStep) else MergeStep(int(s[0]), int(s[1]), float(s[2]), float(s[3]))
                      for s in self.steps)
        object.__setattr__(self, "steps", steps)
        object.__setattr__(self, "method", LinkageMethod.parse(self.method))
        object.__setattr__(self, "height_scale", HeightScale(self.height_scale))
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))
        problems = _dendrogram_problems(self.n, steps, self.masses)
        if problems:
            raise ValidationError(problems)
        if self.order is None:
            object.__setattr__(self, "order", tuple(leaf_order(self.n, steps)))
        else:
            object.__setattr__(self, "order", tuple(int(v) for v in self.order))

    @property
    def heights(self) -> np.ndarray:
        return np.array([s.height for s in self.steps])

    def children(self, node: int) -> tuple:
        if node < self.n:
            return ()
        s = self.steps[node - self.n]
        return (s.left, s.right)

    def linkage_matrix(self) -> np.ndarray:
        """(n-1) x 4 array ``[left, right, height, size]``."""
        return np.array([[s.left, s.right, s.height, s.size] for s in self.steps], dtype=float).reshape(-1, 4)

    def __eq__(self, other):
        if not isinstance(other, Dendrogram):
            return NotImplemented
        return (self.n == other.n and self.steps == other.steps and self.method is other.method
                and self.height_scale is other.height_scale and self.order == other.order
                and self.labels == other.labels and self.masses == other.masses)

    __hash__ = None


def _dendrogram_problems(n, steps, masses=None):
    if n < 1:
        return [f"leaf count must be >= 1, got {n}"]
    if len(steps) != n - 1:
        return [f"{len(steps)} merge steps for {n} leaves (need {n - 1})"]
    problems = []
    if masses is not None and len(masses) != n:
        return [f"{len(masses)} leaf masses for {n} leaves"]
    used = set()
    sizes = dict(enumerate(masses if masses is not None else [1.0] * n))
    for t, s in enumerate(steps):
        for child in (s.left, s.right):
            if not 0 <= child < n + t:
                problems.append(f"step {t}: child {child} does not exist yet")
            elif child in used:
                problems.append(f"step {t}: node {child} merged twice")
            used.add(child)
        if s.left == s.right:
            problems.append(f"step {t}: node {s.left} merged with itself")
        if not math.isfinite(s.height):
            problems.append(f"step {t}: non-finite height")
        expected = sizes.get(s.left, None), sizes.get(s.right, None)
        if None not in expected and not math.isclose(s.size, expected[0] + expected[1], rel_tol=1e-12):
            problems.append(f"step {t}: size {s.size} != {expected[0]} + {expected[1]}")
        sizes[n + t] = s.size
    return problems


def leaf_order(n: int, steps) -> list:
    """Leaves in left-to-right depth-first order from the root."""
    if n == 1:
        return [0]
    out = []
    stack = [n + len(steps) - 1]
    while stack:
        node = stack.pop()
        if node < n:
            out.append(node)
        else:
            s = steps[node - n]
            stack.append(s.right)
            stack.append(s.left)
    return out


def leaf_sizes(n: int, steps, masses=None) -> list:
    """Leaf-count (or mass) of every node, leaves first."""
    sizes = list(np.ones(n) if masses is None else masses) + [0.0] * len(steps)
    for t, s in enumerate(steps):
        sizes[n + t] = sizes[s.left] + sizes[s.right]
    return sizes


@dataclass(frozen=True, eq=False)
class Partition:
    assignment: np.ndarray
    k: int = None

    def __post_init__(self):
        a = np.asarray(self.assignment, dtype=int).reshape(-1)
        k = int(a.max()) + 1 if self.k is None and a.size else int(self.k or 0)
        present = np.unique(a)
        if a.size == 0 or a.min() < 0 or a.max() >= k or present.size != k:
            raise ValidationError([f"assignment must use every cluster index 0..{k - 1} at least once"])
        a.setflags(write=False)
        object.__setattr__(self, "assignment", a)
        object.__setattr__(self, "k", k)

    def members(self, q: int) -> np.ndarray:
        return np.flatnonzero(self.assignment == q)
