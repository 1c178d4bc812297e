"""Matrix-backed domain types: weighted graphs, similarity matrices,
covariate tables, partitions and fused matrices.

All matrices are dense ``float64`` arrays flagged read-only after
construction. Dense storage is practical up to roughly 10^4 nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (
    AlphaOutOfRangeError,
    AsymmetricError,
    DimensionMismatchError,
    InvalidPartitionError,
    NegativeEntryError,
    NonFiniteEntryError,
    NonSquareError,
    NonzeroDiagonalError,
    WrongDimensionError,
)

ASYMMETRY_RTOL = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def _check_square_matrix(m, what: str) -> np.ndarray:
    m = np.array(m, dtype=float, copy=True)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NonSquareError(f"{what} must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NonFiniteEntryError(f"{what} has non-finite entries")
    if np.any(m < 0):
        i, j = np.argwhere(m < 0)[0]
        raise NegativeEntryError(f"{what}[{i},{j}] = {m[i, j]} is negative")
    if np.any(np.diag(m) != 0):
        i = int(np.flatnonzero(np.diag(m))[0])
        raise NonzeroDiagonalError(f"{what}[{i},{i}] = {m[i, i]}; self-loops are not allowed")
    scale = float(np.max(m)) if m.size else 0.0
    gap = float(np.max(np.abs(m - m.T))) if m.size else 0.0
    if gap > ASYMMETRY_RTOL * max(scale, np.finfo(float).tiny):
        raise AsymmetricError(f"{what} is not symmetric (max |m_ij - m_ji| = {gap:.3g})")
    # within tolerance: remove floating-point noise so downstream code sees exact symmetry
    return 0.5 * (m + m.T)


def _check_ids(node_ids, n):
    if node_ids is None:
        return None
    ids = tuple(str(x) for x in node_ids)
    if len(ids) != n:
        raise DimensionMismatchError(f"{len(ids)} node ids for {n} nodes")
    if len(set(ids)) != n:
        raise DimensionMismatchError("node ids must be unique")
    return ids


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Undirected weighted graph: symmetric, nonnegative, zero diagonal."""

    weights: np.ndarray
    node_ids: Optional[tuple] = None

    def __post_init__(self):
        w = _check_square_matrix(self.weights, "weight matrix")
        object.__setattr__(self, "weights", _frozen(w))
        object.__setattr__(self, "node_ids", _check_ids(self.node_ids, w.shape[0]))

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @property
    def ids(self) -> tuple:
        """Node ids, defaulting to ``"0".."n-1"``."""
        return self.node_ids if self.node_ids is not None else tuple(str(i) for i in range(self.n))

    def degrees(self) -> np.ndarray:
        return self.weights.sum(axis=1)

    def n_edges(self) -> int:
        return int(np.count_nonzero(np.triu(self.weights, 1)))

    def subgraph(self, keep) -> "WeightedGraph":
        keep = np.asarray(keep)
        ids = None if self.node_ids is None else tuple(np.asarray(self.node_ids, dtype=object)[keep])
        return WeightedGraph(self.weights[np.ix_(keep, keep)], ids)

    def reorder(self, node_ids: Sequence[str]) -> "WeightedGraph":
        """Return the same graph with nodes permuted into ``node_ids`` order."""
        pos = {v: i for i, v in enumerate(self.ids)}
        idx = [pos[str(v)] for v in node_ids]
        return self.subgraph(idx)


@dataclass(frozen=True, eq=False)
class SimilarityMatrix:
    """Symmetric nonnegative covariate-similarity matrix with zero diagonal."""

    sims: np.ndarray
    node_ids: Optional[tuple] = None

    def __post_init__(self):
        s = _check_square_matrix(self.sims, "similarity matrix")
        object.__setattr__(self, "sims", _frozen(s))
        object.__setattr__(self, "node_ids", _check_ids(self.node_ids, s.shape[0]))

    @property
    def n(self) -> int:
        return self.sims.shape[0]

    def subset(self, keep) -> "SimilarityMatrix":
        keep = np.asarray(keep)
        ids = None if self.node_ids is None else tuple(np.asarray(self.node_ids, dtype=object)[keep])
        return SimilarityMatrix(self.sims[np.ix_(keep, keep)], ids)


@dataclass(frozen=True, eq=False)
class CovariateTable:
    """``n`` rows of ``p`` finite covariates."""

    rows: np.ndarray
    node_ids: Optional[tuple] = None

    def __post_init__(self):
        x = np.array(self.rows, dtype=float, copy=True)
        if x.ndim == 1:
            x = x[:, None]
        if x.ndim != 2:
            raise WrongDimensionError(f"covariates must be an n x p table, got shape {x.shape}")
        if not np.all(np.isfinite(x)):
            raise NonFiniteEntryError("covariate table has non-finite entries")
        object.__setattr__(self, "rows", _frozen(x))
        object.__setattr__(self, "node_ids", _check_ids(self.node_ids, x.shape[0]))

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    @property
    def p(self) -> int:
        return self.rows.shape[1]


@dataclass(frozen=True, eq=False)
class Partition:
    """Community assignment with labels compacted to ``1..k_realized``."""

    labels: np.ndarray
    k_realized: int = field(init=False)

    def __post_init__(self):
        lab = np.asarray(self.labels)
        if lab.ndim != 1:
            raise InvalidPartitionError("labels must be a 1-d vector")
        if lab.size and not np.issubdtype(lab.dtype, np.integer):
            if not np.all(lab == np.round(lab)):
                raise InvalidPartitionError("labels must be integers")
        lab = lab.astype(np.int64)
        k = int(lab.max()) if lab.size else 0
        if lab.size and (lab.min() < 1 or np.unique(lab).size != k):
            raise InvalidPartitionError("labels must be compacted to 1..K with every label present")
        object.__setattr__(self, "labels", _frozen(lab.copy()))
        object.__setattr__(self, "k_realized", k)

    @classmethod
    def from_labels(cls, labels) -> "Partition":
        """Compact arbitrary hashable labels to ``1..K`` in first-appearance order."""
        labels = list(np.asarray(labels).tolist())
        index = {}
        out = np.empty(len(labels), dtype=np.int64)
        for i, lab in enumerate(labels):
            out[i] = index.setdefault(lab, len(index) + 1)
        return cls(out)

    @property
    def n(self) -> int:
        return self.labels.size

    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.k_realized + 1)[1:]

    def members(self, cluster: int) -> np.ndarray:
        return np.flatnonzero(self.labels == cluster)

    def __eq__(self, other):
        return isinstance(other, Partition) and np.array_equal(self.labels, other.labels)

    def __hash__(self):
        return hash(self.labels.tobytes())


@dataclass(frozen=True, eq=False)
class FusedMatrix:
    """``(1 - alpha) * W + alpha * S``."""

    entries: np.ndarray
    alpha: float

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def validate_graph(raw_matrix, node_ids=None) -> WeightedGraph:
    """Validate a raw square matrix as a :class:`WeightedGraph`.

    Asymmetry beyond ``1e-12`` relative to the largest weight is an error;
    the matrix is never symmetrized silently.
    """
    return WeightedGraph(raw_matrix, node_ids)


def fuse(w: WeightedGraph, s: SimilarityMatrix, alpha: float) -> FusedMatrix:
    """Convex combination of structure and (already rescaled) similarity."""
    if w.n != s.n:
        raise DimensionMismatchError(f"graph has {w.n} nodes, similarity has {s.n}")
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise AlphaOutOfRangeError(f"alpha must lie in [0, 1], got {alpha}")
    if alpha == 0.0:
        c = w.weights.copy()
    elif alpha == 1.0:
        c = s.sims.copy()
    else:
        # algebraically (1 - alpha) W + alpha S; exact when S == W
        c = w.weights + alpha * (s.sims - w.weights)
    return FusedMatrix(_frozen(c), alpha)


def drop_isolated(w: WeightedGraph):
    """Remove zero-degree nodes. Returns ``(graph, kept_indices, dropped_ids)``."""
    keep = np.flatnonzero(w.degrees() > 0)
    dropped = [w.ids[i] for i in np.flatnonzero(w.degrees() <= 0)]
    if not dropped:
        return w, keep, []
    return w.subgraph(keep), keep, dropped
