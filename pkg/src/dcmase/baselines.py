"""Competing multilayer spectral embeddings and the method registry.

Every baseline produces an embedding that goes through the same tail as
DC-MASE: optional spherical projection followed by K-means.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .clustering import KMeansConfig, cluster_rows
from .embedding import EmbeddingMatrix, scaled_embedding, spherical_normalize
from .joint import dcmase
from .spectral import check_symmetric, truncated_svd


def _layers(layers) -> list[np.ndarray]:
    layers = [check_symmetric(A, name=f"layer {l}") for l, A in enumerate(layers)]
    if not layers:
        raise ValueError("need at least one layer")
    if any(A.shape != layers[0].shape for A in layers):
        raise ValueError("all layers must have the same shape")
    return layers


def mean_adjacency_embed(layers: Sequence, k: int) -> EmbeddingMatrix:
    """Scaled embedding of the average adjacency matrix."""
    layers = _layers(layers)
    return scaled_embedding(sum(layers) / len(layers), k)


def sos_matrix(layers: Sequence) -> np.ndarray:
    """Bias-adjusted sum of squares: sum over layers of ``A @ A - diag(degrees)``."""
    layers = _layers(layers)
    S = np.zeros_like(layers[0])
    for A in layers:
        S += A @ A
        S[np.diag_indices_from(S)] -= A.sum(axis=1)
    return 0.5 * (S + S.T)


def bias_adjusted_sos_embed(layers: Sequence, k: int) -> EmbeddingMatrix:
    return scaled_embedding(sos_matrix(layers), k)


def mase_embed(layers: Sequence, per_layer_ranks, k: int) -> EmbeddingMatrix:
    """Scaled MASE: concatenated per-layer scaled embeddings, no row normalisation."""
    layers = _layers(layers)
    if np.isscalar(per_layer_ranks):
        per_layer_ranks = [int(per_layer_ranks)] * len(layers)
    Xs = [scaled_embedding(A, r).rows for A, r in zip(layers, per_layer_ranks)]
    svd = truncated_svd(np.hstack(Xs), k)
    return EmbeddingMatrix(svd.left, "joint_U", values=svd.singular)


def baseline_cluster(embedding: EmbeddingMatrix, K: int, normalize: bool = True,
                     cluster: KMeansConfig | None = None) -> np.ndarray:
    """Labels from (optionally sphere-projected) embedding rows."""
    exclude = ()
    if normalize:
        embedding = spherical_normalize(embedding)
        exclude = embedding.zero_rows
    return cluster_rows(embedding.rows, K, cluster, exclude=exclude).labels


@dataclass(frozen=True)
class MethodResult:
    labels: np.ndarray
    embedding: EmbeddingMatrix


def _fit_dcmase(layers, K, cluster=None):
    res = dcmase(layers, K, cluster=cluster)
    return MethodResult(res.labels, res.joint.U)


def _fit_with(embed):
    def fit(layers, K, cluster=None):
        emb = embed(layers, K)
        return MethodResult(baseline_cluster(emb, K, True, cluster), emb)
    return fit


METHODS: dict[str, Callable[..., MethodResult]] = {
    "dcmase": _fit_dcmase,
    "mean_adj": _fit_with(mean_adjacency_embed),
    "sos": _fit_with(bias_adjusted_sos_embed),
    "mase": _fit_with(lambda layers, K: mase_embed(layers, K, K)),
}


def run_method(name: str, layers: Sequence, K: int,
               cluster: KMeansConfig | None = None) -> MethodResult:
    """Fit a registered method with per-layer and joint ranks equal to ``K``."""
    try:
        fit = METHODS[name]
    except KeyError:
        raise KeyError(f"unknown method {name!r}; choose from {sorted(METHODS)}") from None
    return fit(layers, K, cluster)

