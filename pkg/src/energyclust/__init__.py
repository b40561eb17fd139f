"""Clustering of multivariate time-series components by energy distance."""
from ._backend import BACKEND
from .embedding import (
    DataError,
    TimeSeriesPanel,
    bivariate_sum_dissimilarity_matrix,
    joint_dissimilarity_matrix,
    lag_embed,
    log_growth,
    normalize,
    pair_embed_bivariate,
)
from .energy import (
    closed_form_laplace_vs_normal,
    closed_form_normal,
    energy_distance_gaussian_kernel,
    energy_distance_quadrature_1d,
    energy_distance_vstat,
)
from .evaluation import Method, run_experiment, similarity_index
from .hclust import Dendrogram, agglomerate, cut, select_k, silhouette

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DataError",
    "Dendrogram",
    "Method",
    "TimeSeriesPanel",
    "agglomerate",
    "bivariate_sum_dissimilarity_matrix",
    "closed_form_laplace_vs_normal",
    "closed_form_normal",
    "cut",
    "energy_distance_gaussian_kernel",
    "energy_distance_quadrature_1d",
    "energy_distance_vstat",
    "joint_dissimilarity_matrix",
    "lag_embed",
    "log_growth",
    "normalize",
    "pair_embed_bivariate",
    "run_experiment",
    "select_k",
    "silhouette",
    "similarity_index",
]
