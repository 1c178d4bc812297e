"""Covariate-assisted spectral community detection for weighted networks."""

__version__ = "0.1.0"

from .c4 import C4Config, C4Result, inverse_distance, run_baseline, run_c4, silhouette_score
from .graph import (
    CovariateTable,
    FusedMatrix,
    Partition,
    SimilarityMatrix,
    WeightedGraph,
    fuse,
    validate_graph,
)
from .kmeans import KMeansConfig
from .metrics import adjusted_rand_index, community_summary, density_table, node_strength
from .similarity import inverse_euclidean_similarity, mean_value_similarity, rescale_to_match
from .spectral import eigendecompose, eigengap_select_k, normalized_laplacian, spectral_embed_and_cluster

__all__ = [
    "C4Config",
    "C4Result",
    "CovariateTable",
    "FusedMatrix",
    "KMeansConfig",
    "Partition",
    "SimilarityMatrix",
    "WeightedGraph",
    "adjusted_rand_index",
    "community_summary",
    "density_table",
    "eigendecompose",
    "eigengap_select_k",
    "fuse",
    "inverse_distance",
    "inverse_euclidean_similarity",
    "mean_value_similarity",
    "node_strength",
    "normalized_laplacian",
    "rescale_to_match",
    "run_baseline",
    "run_c4",
    "silhouette_score",
    "spectral_embed_and_cluster",
    "validate_graph",
]
