"""Seeded Lloyd k-means with k-means++ initialisation and restarts.

Kept in-house so that results depend only on the seed: no thread-count
dependent reductions, no library-version drift.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigError, KOutOfRangeError


@dataclass(frozen=True)
class KMeansConfig:
    restarts: int = 20
    max_iters: int = 300
    tol: float = 1e-6
    seed: Optional[int] = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ConfigError("restarts must be >= 1")
        if self.max_iters < 1:
            raise ConfigError("max_iters must be >= 1")
        if not self.tol > 0:
            raise ConfigError("tol must be positive")


def _sq_dists(x, x_sq, centers):
    d = x_sq[:, None] - 2.0 * (x @ centers.T) + np.einsum("ij,ij->i", centers, centers)[None, :]
    np.maximum(d, 0.0, out=d)
    return d


def _plus_plus(x, x_sq, k, rng):
    n = x.shape[0]
    centers = np.empty((k, x.shape[1]))
    centers[0] = x[rng.integers(n)]
    closest = _sq_dists(x, x_sq, centers[:1])[:, 0]
    for c in range(1, k):
        total = closest.sum()
        u = rng.random()
        if total > 0:
            idx = int(np.searchsorted(np.cumsum(closest), u * total, side="right"))
            idx = min(idx, n - 1)
        else:
            # every point coincides with a chosen center
            idx = int(u * n) % n
        centers[c] = x[idx]
        np.minimum(closest, _sq_dists(x, x_sq, centers[c : c + 1])[:, 0], out=closest)
    return centers


def _lloyd(x, x_sq, centers, max_iters, tol):
    k = centers.shape[0]
    for _ in range(max_iters):
        labels = np.argmin(_sq_dists(x, x_sq, centers), axis=1)
        member = (labels[None, :] == np.arange(k)[:, None]).astype(float)
        counts = member.sum(axis=1)
        sums = member @ x
        new = centers.copy()
        filled = counts > 0
        # empty clusters keep their previous center
        new[filled] = sums[filled] / counts[filled, None]
        shift = np.sqrt(np.max(np.sum((new - centers) ** 2, axis=1)))
        centers = new
        if shift <= tol:
            break
    d = _sq_dists(x, x_sq, centers)
    labels = np.argmin(d, axis=1)
    inertia = float(d[np.arange(x.shape[0]), labels].sum())
    return labels, centers, inertia


def kmeans(x, k: int, cfg: KMeansConfig = KMeansConfig()):
    """Cluster the rows of ``x`` into at most ``k`` groups.

    Returns ``(labels, centers, inertia)`` for the best of ``cfg.restarts``
    runs; labels are 0-based and may leave some clusters empty.
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    if not 1 <= k <= n:
        raise KOutOfRangeError(f"k = {k} outside 1..{n}")
    rng = np.random.default_rng(cfg.seed)
    x_sq = np.einsum("ij,ij->i", x, x)
    best = None
    for _ in range(cfg.restarts):
        centers = _plus_plus(x, x_sq, k, rng)
        labels, centers, inertia = _lloyd(x, x_sq, centers, cfg.max_iters, cfg.tol)
        if best is None or inertia < best[2]:
            best = (labels, centers, inertia)
    return best
