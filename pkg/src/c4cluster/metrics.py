"""Partition agreement and community descriptors."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EmptyClusterError, LengthMismatchError
from .graph import Partition, WeightedGraph


@dataclass(frozen=True, eq=False)
class ContingencyTable:
    counts: np.ndarray

    @property
    def row_sums(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def col_sums(self) -> np.ndarray:
        return self.counts.sum(axis=0)

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def _as_labels(p) -> np.ndarray:
    return p.labels if isinstance(p, Partition) else np.asarray(p)


def contingency_table(a, b) -> ContingencyTable:
    la, lb = _as_labels(a), _as_labels(b)
    if la.shape != lb.shape:
        raise LengthMismatchError(f"partitions have lengths {la.size} and {lb.size}")
    _, ia = np.unique(la, return_inverse=True)
    _, ib = np.unique(lb, return_inverse=True)
    counts = np.zeros((ia.max(initial=-1) + 1, ib.max(initial=-1) + 1), dtype=np.int64)
    np.add.at(counts, (ia, ib), 1)
    return ContingencyTable(counts)


def _pairs(x) -> int:
    # exact integer C(x, 2) summed
    x = np.asarray(x, dtype=np.int64)
    return int((x * (x - 1) // 2).sum())


def adjusted_rand_index(a, b) -> float:
    """Hubert-Arabie adjusted Rand index.

    Returns 1.0 when the expected and maximum indices coincide (e.g. both
    partitions are a single cluster, or both are all singletons).
    """
    table = contingency_table(a, b)
    n = table.total
    index = _pairs(table.counts.ravel())
    sum_a = _pairs(table.row_sums)
    sum_b = _pairs(table.col_sums)
    total_pairs = n * (n - 1) // 2
    expected = sum_a * sum_b / total_pairs if total_pairs else 0.0
    max_index = 0.5 * (sum_a + sum_b)
    denom = max_index - expected
    if denom == 0:
        return 1.0
    return float((index - expected) / denom)


def node_strength(w: WeightedGraph) -> np.ndarray:
    return w.weights.sum(axis=1)


@dataclass(frozen=True, eq=False)
class DensityTable:
    """Edge densities between communities; ``densities[a, b]`` is symmetric.

    Diagonal entries for singleton communities (no possible pairs) are 0.
    """

    densities: np.ndarray
    edges: np.ndarray
    possible: np.ndarray

    @property
    def k(self) -> int:
        return self.densities.shape[0]

    def to_csv(self, path) -> None:
        """Upper-triangular table in rounded percent, rows/cols ``C-1..C-K``."""
        names = [f"C-{i + 1}" for i in range(self.k)]
        with open(path, "w", newline="", encoding="utf-8") as fh:
            wr = csv.writer(fh, lineterminator="\n")
            wr.writerow([""] + names)
            for i in range(self.k):
                cells = ["" if j < i else f"{100 * self.densities[i, j]:.0f}" for j in range(self.k)]
                wr.writerow([names[i]] + cells)


def density_table(w: WeightedGraph, part: Partition) -> DensityTable:
    """Fraction of node pairs joined by an edge (``w_ij > 0``) within and between communities."""
    if part.n != w.n:
        raise LengthMismatchError(f"partition has {part.n} nodes, graph has {w.n}")
    sizes = part.sizes()
    if np.any(sizes == 0):
        raise EmptyClusterError("partition has an empty cluster")
    k = part.k_realized
    onehot = np.zeros((w.n, k))
    onehot[np.arange(w.n), part.labels - 1] = 1.0
    adj = (w.weights > 0).astype(float)
    edges = onehot.T @ adj @ onehot
    edges[np.diag_indices(k)] /= 2.0
    possible = np.outer(sizes, sizes).astype(float)
    possible[np.diag_indices(k)] = sizes * (sizes - 1) / 2.0
    with np.errstate(invalid="ignore", divide="ignore"):
        dens = np.where(possible > 0, edges / possible, 0.0)
    return DensityTable(dens, np.rint(edges).astype(np.int64), possible.astype(np.int64))


@dataclass(frozen=True)
class CommunityRecord:
    cluster: int
    size: int
    largest_node: str
    largest_strength: float
    median_covariate: float


def community_summary(w: WeightedGraph, part: Partition, covariate, names: Sequence[str]) -> list:
    """Per community: size, highest-strength member and covariate median.

    Records are sorted by size, largest first (ties by label).
    """
    covariate = np.asarray(covariate, dtype=float)
    if not (part.n == w.n == covariate.size == len(names)):
        raise LengthMismatchError("graph, partition, covariate and names must align")
    strength = node_strength(w)
    out = []
    for c in range(1, part.k_realized + 1):
        idx = part.members(c)
        top = idx[np.argmax(strength[idx])]
        out.append(CommunityRecord(c, idx.size, str(names[top]), float(strength[top]), float(np.median(covariate[idx]))))
    out.sort(key=lambda r: (-r.size, r.cluster))
    return out


def write_community_summary(records, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(["rank", "cluster", "size", "largest_node", "largest_strength", "median_covariate"])
        for rank, r in enumerate(records, 1):
            wr.writerow([rank, r.cluster, r.size, r.largest_node, repr(r.largest_strength), repr(r.median_covariate)])


def relabel_by_size(part: Partition) -> Partition:
    """Relabel so cluster 1 is the largest (ties by original label)."""
    sizes = part.sizes()
    order = sorted(range(1, part.k_realized + 1), key=lambda c: (-sizes[c - 1], c))
    mapping = np.zeros(part.k_realized + 1, dtype=np.int64)
    for new, old in enumerate(order, 1):
        mapping[old] = new
    return Partition(mapping[part.labels])
