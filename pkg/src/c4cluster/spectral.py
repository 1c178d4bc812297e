"""Normalized Laplacian, eigendecomposition, eigengap K selection and the
spectral embedding + k-means step."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from .errors import (
    IsolatedNodeError,
    KOutOfRangeError,
    NoConvergenceError,
    NonSquareError,
    NotSymmetricError,
    TooFewNodesError,
)
from .graph import FusedMatrix, Partition
from .kmeans import KMeansConfig, kmeans

DEFAULT_K_MAX = 30


@dataclass(frozen=True, eq=False)
class EigenSpectrum:
    """Ascending eigenvalues; column ``k`` of ``vectors`` pairs with ``values[k]``."""

    values: np.ndarray
    vectors: np.ndarray

    @property
    def n(self) -> int:
        return self.values.size


def normalized_laplacian(c) -> np.ndarray:
    """``I - D^{-1/2} C D^{-1/2}`` with ``D = diag(row sums of C)``.

    Raises :class:`IsolatedNodeError` listing every zero-degree row.
    """
    m = c.entries if isinstance(c, FusedMatrix) else np.asarray(c, dtype=float)
    deg = m.sum(axis=1)
    bad = np.flatnonzero(deg <= 0)
    if bad.size:
        raise IsolatedNodeError(bad)
    inv_sqrt = 1.0 / np.sqrt(deg)
    lap = -(inv_sqrt[:, None] * m * inv_sqrt[None, :])
    lap[np.diag_indices_from(lap)] += 1.0
    return 0.5 * (lap + lap.T)


def eigendecompose(lap, sym_tol: float = 1e-10) -> EigenSpectrum:
    lap = np.asarray(lap, dtype=float)
    if lap.ndim != 2 or lap.shape[0] != lap.shape[1]:
        raise NonSquareError(f"matrix must be square, got {lap.shape}")
    scale = max(1.0, float(np.max(np.abs(lap)))) if lap.size else 1.0
    if lap.size and np.max(np.abs(lap - lap.T)) > sym_tol * scale:
        raise NotSymmetricError("matrix is not symmetric")
    try:
        vals, vecs = scipy.linalg.eigh(lap, check_finite=True)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NoConvergenceError(str(exc)) from exc
    vals.flags.writeable = False
    vecs.flags.writeable = False
    return EigenSpectrum(vals, vecs)


def default_k_max(n: int) -> int:
    return min(n - 1, DEFAULT_K_MAX)


def eigengap_select_k(spec, k_max: Optional[int] = None) -> int:
    """Largest gap ``lambda_(k+1) - lambda_(k)`` over ``k = 2..k_max`` (1-based).

    Ties go to the smallest ``k``. Accepts an :class:`EigenSpectrum` or a
    plain ascending array of eigenvalues.
    """
    vals = spec.values if isinstance(spec, EigenSpectrum) else np.asarray(spec, dtype=float)
    n = vals.size
    if n < 3:
        raise TooFewNodesError(f"eigengap selection needs n >= 3, got {n}")
    if k_max is None:
        k_max = default_k_max(n)
    if not 2 <= k_max <= n - 1:
        raise KOutOfRangeError(f"k_max = {k_max} outside 2..{n - 1}")
    # gaps[i] = lambda_(i+3) - lambda_(i+2), i.e. k = i + 2
    gaps = vals[2 : k_max + 1] - vals[1:k_max]
    return int(np.argmax(gaps)) + 2


def spectral_embedding(spec: EigenSpectrum, k: int) -> np.ndarray:
    """Rows of the bottom-``k`` eigenvectors, scaled to unit length (zero rows kept)."""
    u = np.array(spec.vectors[:, :k])
    norms = np.linalg.norm(u, axis=1)
    nz = norms > 0
    u[nz] /= norms[nz, None]
    return u


def spectral_embed_and_cluster(spec: EigenSpectrum, k: int, cfg: KMeansConfig = KMeansConfig()) -> Partition:
    n = spec.n
    if not 2 <= k <= n:
        raise KOutOfRangeError(f"k = {k} outside 2..{n}")
    labels, _, _ = kmeans(spectral_embedding(spec, k), k, cfg)
    return Partition.from_labels(labels)
