"""Synthetic weighted SBM networks with Gaussian node covariates.

Nodes are split into ``k`` balanced communities. Each node carries a
3-dimensional covariate drawn around its community center (vertices of a
regular tetrahedron for k = 4, of a cube for k = 8). Edges appear with
probability ``b_win`` inside a community and ``b_btw`` across, and present
edges are either weight 1 or Gamma(shape=2, scale=theta).
"""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, replace
from typing import Optional

import numpy as np

from .errors import ConfigError, UnsupportedKError
from .graph import CovariateTable, Partition, WeightedGraph

GAMMA_SHAPE = 2.0

LATTICE = {
    "n": (400, 800),
    "k": (4, 8),
    "sigma": (2.0, 3.0),
    "b_btw": (0.3, 0.4, 0.5),
    "theta_win": (None, 1.0, 1.25, 1.5),  # None = unweighted
}


@dataclass(frozen=True)
class SimConfig:
    n: int = 400
    k: int = 4
    sigma: float = 2.0
    b_win: float = 0.6
    b_btw: float = 0.3
    theta_win: Optional[float] = None  # None: unweighted network
    theta_btw: float = 1.0
    edge_length: float = 10.0
    seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.k < 1 or self.k > self.n:
            raise ConfigError(f"need 1 <= k <= n, got n={self.n}, k={self.k}")
        if self.k not in (4, 8):
            raise UnsupportedKError(f"geometric centers exist for k in {{4, 8}}, got {self.k}")
        for name in ("b_win", "b_btw"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1]")
        if not self.sigma > 0:
            raise ConfigError("sigma must be positive")
        if self.theta_win is not None and not (self.theta_win > 0 and self.theta_btw > 0):
            raise ConfigError("gamma scales must be positive")
        if not self.edge_length > 0:
            raise ConfigError("edge_length must be positive")

    @property
    def weighted(self) -> bool:
        return self.theta_win is not None

    @property
    def weighting(self) -> str:
        return "unweighted" if self.theta_win is None else f"gamma_{self.theta_win:g}"

    def cell_key(self) -> tuple:
        """Integer key identifying the lattice cell (independent of the seed)."""
        theta = 0 if self.theta_win is None else round(self.theta_win * 1000)
        return (
            self.n,
            self.k,
            round(self.sigma * 1000),
            round(self.b_win * 1000),
            round(self.b_btw * 1000),
            theta,
            round(self.theta_btw * 1000),
            round(self.edge_length * 1000),
        )

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True, eq=False)
class SimInstance:
    graph: WeightedGraph
    covariates: CovariateTable
    truth: Partition
    config: SimConfig


def cluster_centers(k: int, edge_length: float = 10.0) -> np.ndarray:
    """``k x 3`` centers: tetrahedron (k = 4) or cube (k = 8), centroid at the origin."""
    if not edge_length > 0:
        raise ConfigError("edge_length must be positive")
    if k == 4:
        base = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float)
        return base * (edge_length / (2.0 * np.sqrt(2.0)))
    if k == 8:
        base = np.array(list(itertools.product((-1.0, 1.0), repeat=3)))
        return base * (edge_length / 2.0)
    raise UnsupportedKError(f"geometric centers exist for k in {{4, 8}}, got {k}")


def balanced_labels(n: int, k: int) -> np.ndarray:
    """Contiguous blocks of size ``n // k`` or ``n // k + 1``; 1-based."""
    sizes = np.full(k, n // k)
    sizes[: n % k] += 1
    return np.repeat(np.arange(1, k + 1), sizes)


def generate(cfg: SimConfig, seed: Optional[int] = None) -> SimInstance:
    """Draw one instance. ``seed`` overrides ``cfg.seed`` when given."""
    rng = np.random.default_rng(cfg.seed if seed is None else seed)
    n, k = cfg.n, cfg.k
    z = balanced_labels(n, k)
    centers = cluster_centers(k, cfg.edge_length)
    x = centers[z - 1] + cfg.sigma * rng.standard_normal((n, 3))

    same = z[:, None] == z[None, :]
    prob = np.where(same, cfg.b_win, cfg.b_btw)
    upper = np.triu(np.ones((n, n), dtype=bool), 1)
    present = (rng.random((n, n)) < prob) & upper
    if cfg.weighted:
        scale = np.where(same, cfg.theta_win, cfg.theta_btw)
        w = np.where(present, rng.gamma(GAMMA_SHAPE, scale), 0.0)
    else:
        w = present.astype(float)
    w = w + w.T
    ids = tuple(str(i + 1) for i in range(n))
    return SimInstance(WeightedGraph(w, ids), CovariateTable(x, ids), Partition(z), cfg)


def derive_seed(base_seed: int, cfg: SimConfig, replicate: int) -> int:
    """Seed for one replicate of one lattice cell.

    ``SeedSequence(entropy=base_seed, spawn_key=(*cell_key, replicate))``:
    stable across versions and independent of which cells are selected.
    """
    ss = np.random.SeedSequence(entropy=int(base_seed), spawn_key=(*cfg.cell_key(), int(replicate)))
    return int(ss.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


def simulation_grid(base: SimConfig = SimConfig()) -> list:
    """The full 2 x 2 x 2 x 3 x 4 = 96-cell lattice, in a fixed order.

    Non-lattice fields (``b_win``, ``theta_btw``, ``edge_length``, ``seed``)
    are copied from ``base``.
    """
    cells = []
    for n, k, sigma, b_btw, theta in itertools.product(*LATTICE.values()):
        cells.append(replace(base, n=n, k=k, sigma=sigma, b_btw=b_btw, theta_win=theta))
    return cells


def replicate_configs(cfg: SimConfig, replicates: int) -> list:
    """``cfg`` with per-replicate derived seeds (``cfg.seed`` is the base seed)."""
    return [replace(cfg, seed=derive_seed(cfg.seed, cfg, r)) for r in range(replicates)]
