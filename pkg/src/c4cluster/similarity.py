"""Covariate similarity construction and scale matching."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .errors import (
    ConfigError,
    DegenerateTableError,
    DimensionMismatchError,
    WrongDimensionError,
    ZeroSimilaritySumError,
    ZeroWeightSumError,
)
from .graph import CovariateTable, SimilarityMatrix, WeightedGraph

SIMILARITY_KINDS = ("inverse_euclidean", "mean_value", "precomputed")


@dataclass(frozen=True)
class SimilaritySpec:
    kind: str = "inverse_euclidean"
    epsilon_distance: float = 1e-8

    def __post_init__(self):
        if self.kind not in SIMILARITY_KINDS:
            raise ConfigError(f"unknown similarity kind {self.kind!r}")
        if not self.epsilon_distance > 0:
            raise ConfigError("epsilon_distance must be positive")

    def build(self, x: CovariateTable) -> SimilarityMatrix:
        if self.kind == "inverse_euclidean":
            return inverse_euclidean_similarity(x, self.epsilon_distance)
        if self.kind == "mean_value":
            return mean_value_similarity(x)
        raise ConfigError("precomputed similarities are read from a matrix file, not built")


def inverse_euclidean_similarity(x: CovariateTable, eps: float = 1e-8) -> SimilarityMatrix:
    """``s_ij = 1 / (||X_i - X_j|| + eps)`` off the diagonal, zero on it."""
    if x.n < 2:
        raise DegenerateTableError(f"need at least 2 rows, got {x.n}")
    if not eps > 0:
        raise ConfigError("eps must be positive")
    d = squareform(pdist(x.rows, metric="euclidean"))
    s = 1.0 / (d + eps)
    np.fill_diagonal(s, 0.0)
    return SimilarityMatrix(s, x.node_ids)


def mean_value_similarity(x: CovariateTable) -> SimilarityMatrix:
    """``s_ij = (x_i + x_j) / 2`` for a single covariate.

    Values are used as given; apply any transform (e.g. log) beforehand.
    Negative means are not valid similarities and are rejected downstream.
    """
    if x.p != 1:
        raise WrongDimensionError(f"mean-value similarity needs p = 1, got p = {x.p}")
    v = x.rows[:, 0]
    s = 0.5 * (v[:, None] + v[None, :])
    np.fill_diagonal(s, 0.0)
    return SimilarityMatrix(s, x.node_ids)


def rescale_to_match(s: SimilarityMatrix, w: WeightedGraph) -> SimilarityMatrix:
    """Scale ``s`` so its total sum equals the total edge weight of ``w``."""
    if s.n != w.n:
        raise DimensionMismatchError(f"similarity has {s.n} nodes, graph has {w.n}")
    total_w = float(w.weights.sum())
    total_s = float(s.sims.sum())
    if total_w <= 0:
        raise ZeroWeightSumError("graph has no edges; fusion would be degenerate")
    if total_s <= 0:
        raise ZeroSimilaritySumError("similarity matrix sums to zero")
    factor = total_w / total_s
    if factor == 1.0:
        return s
    return SimilarityMatrix(s.sims * factor, s.node_ids)
