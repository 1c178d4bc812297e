"""Covariate Connectivity Combined Clustering (C4).

For each fusion weight ``alpha`` on a grid, the rescaled covariate
similarity is blended with the adjacency matrix, the number of clusters is
chosen by the eigengap of the normalized Laplacian (unless fixed by the
caller), nodes are clustered in the spectral embedding, and the candidate
is scored by the silhouette of the inverse-similarity distance
``1 / (c_ij + eps)``. The best-scoring ``(alpha, K)`` pair wins.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .errors import AllCandidatesDegenerateError, ConfigError, SingleClusterError
from .graph import FusedMatrix, Partition, SimilarityMatrix, WeightedGraph, fuse
from .kmeans import KMeansConfig
from .similarity import rescale_to_match
from .spectral import (
    default_k_max,
    eigendecompose,
    eigengap_select_k,
    normalized_laplacian,
    spectral_embed_and_cluster,
)

log = logging.getLogger(__name__)

DEFAULT_ALPHA_GRID = tuple(round(0.1 * i, 1) for i in range(11))
DEGENERACY_SILHOUETTE = 0.999


class SilhouetteDegeneracyWarning(UserWarning):
    """Covariate-only candidate reaches a near-perfect silhouette."""


@dataclass(frozen=True)
class C4Config:
    alpha_grid: Sequence[float] = DEFAULT_ALPHA_GRID
    k_true: Optional[int] = None
    epsilon_sil: float = 1e-8
    k_max: Optional[int] = None
    kmeans: KMeansConfig = field(default_factory=KMeansConfig)

    def __post_init__(self):
        grid = tuple(float(a) for a in self.alpha_grid)
        if not grid:
            raise ConfigError("alpha grid is empty")
        if any(not 0.0 <= a <= 1.0 for a in grid):
            raise ConfigError("alpha grid values must lie in [0, 1]")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ConfigError("alpha grid must be strictly ascending")
        if not self.epsilon_sil > 0:
            raise ConfigError("epsilon_sil must be positive")
        if self.k_true is not None and self.k_true < 2:
            raise ConfigError("k_true must be >= 2")
        object.__setattr__(self, "alpha_grid", grid)


@dataclass(frozen=True, eq=False)
class AlphaRecord:
    alpha: float
    k_selected: int
    silhouette: float
    eigenvalues: np.ndarray
    labels: Partition


@dataclass(frozen=True, eq=False)
class C4Result:
    alpha_opt: float
    k_opt: int
    labels: Partition
    per_alpha: tuple
    degeneracy_warning: bool = False

    @property
    def silhouette(self) -> float:
        return self.record(self.alpha_opt).silhouette

    def record(self, alpha: float) -> AlphaRecord:
        for r in self.per_alpha:
            if r.alpha == alpha:
                return r
        raise KeyError(alpha)

    def to_dict(self, with_eigenvalues: bool = True) -> dict:
        out = {
            "alpha_opt": self.alpha_opt,
            "k_opt": self.k_opt,
            "k_realized": self.labels.k_realized,
            "silhouette": _json_float(self.silhouette),
            "degeneracy_warning": self.degeneracy_warning,
            "per_alpha": [],
        }
        for r in self.per_alpha:
            rec = {
                "alpha": r.alpha,
                "k_selected": r.k_selected,
                "k_realized": r.labels.k_realized,
                "silhouette": _json_float(r.silhouette),
            }
            if with_eigenvalues:
                rec["eigenvalues"] = [float(v) for v in r.eigenvalues]
            out["per_alpha"].append(rec)
        return out


def _json_float(x):
    return None if not np.isfinite(x) else float(x)


def inverse_distance(c, eps: float = 1e-8) -> np.ndarray:
    """``d_ij = 1 / (c_ij + eps)`` off the diagonal, zero on it."""
    m = c.entries if isinstance(c, FusedMatrix) else np.asarray(c, dtype=float)
    if not eps > 0:
        raise ConfigError("eps must be positive")
    d = 1.0 / (m + eps)
    np.fill_diagonal(d, 0.0)
    return d


def silhouette_score(dist, part: Partition) -> float:
    """Mean silhouette over nodes from a precomputed distance matrix.

    Members of singleton clusters contribute 0.
    """
    dist = np.asarray(dist, dtype=float)
    k = part.k_realized
    if k < 2:
        raise SingleClusterError(f"silhouette needs >= 2 clusters, got {k}")
    lab = part.labels - 1
    n = lab.size
    onehot = np.zeros((n, k))
    onehot[np.arange(n), lab] = 1.0
    sizes = onehot.sum(axis=0)
    sums = dist @ onehot
    own_size = sizes[lab]
    own_sum = sums[np.arange(n), lab]
    with np.errstate(invalid="ignore", divide="ignore"):
        a = own_sum / (own_size - 1)
        mean_other = sums / sizes[None, :]
    mean_other[np.arange(n), lab] = np.inf
    b = mean_other.min(axis=1)
    denom = np.maximum(a, b)
    s = np.zeros(n)
    ok = (own_size > 1) & (denom > 0)
    s[ok] = (b[ok] - a[ok]) / denom[ok]
    return float(s.mean())


def _evaluate_alpha(w, s_scaled, alpha, cfg: C4Config) -> AlphaRecord:
    c = fuse(w, s_scaled, alpha)
    spec = eigendecompose(normalized_laplacian(c))
    n = c.n
    if cfg.k_true is not None:
        k = cfg.k_true
    else:
        k = eigengap_select_k(spec, cfg.k_max if cfg.k_max is not None else default_k_max(n))
    part = spectral_embed_and_cluster(spec, k, cfg.kmeans)
    try:
        sil = silhouette_score(inverse_distance(c, cfg.epsilon_sil), part)
    except SingleClusterError:
        sil = -np.inf
    return AlphaRecord(alpha, k, sil, spec.values, part)


def run_c4(w: WeightedGraph, s: SimilarityMatrix, cfg: C4Config = C4Config()) -> C4Result:
    """Run C4 on a graph and an unscaled similarity matrix.

    ``s`` is rescaled to the total weight of ``w`` before fusing. The
    k-means seed is the same for every alpha, so a single-point grid
    reproduces the corresponding record of a full-grid run.
    """
    s_scaled = rescale_to_match(s, w)
    records = tuple(_evaluate_alpha(w, s_scaled, a, cfg) for a in cfg.alpha_grid)
    return _select(records)


def _select(records) -> C4Result:
    sils = np.array([r.silhouette for r in records])
    if not np.any(np.isfinite(sils)):
        raise AllCandidatesDegenerateError("every alpha candidate collapsed to a single cluster")
    best = records[int(np.argmax(sils))]  # first maximum: smallest alpha wins ties
    degenerate = any(r.alpha == 1.0 and r.silhouette >= DEGENERACY_SILHOUETTE for r in records)
    if degenerate and len(records) > 1:
        warnings.warn(
            "covariate-only candidate has silhouette >= 0.999; the covariate may trivially "
            "separate nodes, making alpha selection uninformative",
            SilhouetteDegeneracyWarning,
            stacklevel=3,
        )
    log.debug("alpha_opt=%s k_opt=%s silhouette=%.4f", best.alpha, best.k_selected, best.silhouette)
    return C4Result(best.alpha, best.k_selected, best.labels, records, degenerate)


BASELINES = {"structure_only": 0.0, "covariate_only": 1.0}


def run_baseline(w: WeightedGraph, s: SimilarityMatrix, which: str, cfg: C4Config = C4Config()) -> C4Result:
    """Structure-only (alpha = 0) or covariate-only (alpha = 1) spectral clustering."""
    if which not in BASELINES:
        raise ConfigError(f"unknown baseline {which!r}; choose from {sorted(BASELINES)}")
    return run_c4(w, s, replace(cfg, alpha_grid=(BASELINES[which],)))
