"""DC-MASE: joint spherical spectral embedding of multiple layers and clustering."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .clustering import ClusteringResult, KMeansConfig, cluster_rows
from .embedding import EmbeddingMatrix, scaled_embedding, spherical_normalize
from .spectral import check_symmetric, eigenvalue_magnitudes, truncated_svd


@dataclass(frozen=True)
class JointEmbedding:
    U: EmbeddingMatrix
    singular: np.ndarray
    per_layer_ranks: tuple[int, ...]
    K_tilde: int


@dataclass(frozen=True)
class DCMASEResult:
    labels: np.ndarray
    joint: JointEmbedding
    clustering: ClusteringResult
    layer_embeddings: tuple[EmbeddingMatrix, ...]


def _first_elbow(x: np.ndarray) -> int:
    p = x.shape[0]
    scale = max(float(np.max(np.abs(x))), 1.0)
    floor = (1e-12 * scale) ** 2
    best_q, best_ll = 1, -np.inf
    for q in range(1, p):
        head, tail = x[:q], x[q:]
        ss = np.sum((head - head.mean()) ** 2) + np.sum((tail - tail.mean()) ** 2)
        var = max(ss / max(p - 2, 1), floor)
        ll = -0.5 * p * np.log(2 * np.pi * var) - ss / (2 * var)
        if ll > best_ll + 1e-9 * abs(best_ll if np.isfinite(best_ll) else 0):
            best_q, best_ll = q, ll
    return best_q


def select_rank_elbow(values, max_rank: int | None = None, n_elbows: int = 1) -> int:
    """Profile-likelihood elbow of a scree sequence.

    Splits the sorted values into a leading block of size ``q`` and the rest,
    models both as Gaussians with separate means and a pooled variance, and
    returns the ``q`` maximising the likelihood (smallest ``q`` on ties).
    A single dominant value puts the first elbow at 1; ``n_elbows > 1``
    repeats the search on the values after each elbow and returns the
    cumulative position.  The repeat stops early once the remaining values
    are negligible (below ``1e-8`` of the largest), since an elbow inside
    numerical noise means nothing.
    """
    x = np.sort(np.asarray(values, dtype=float))[::-1]
    if x.shape[0] < 2:
        raise ValueError("need at least two values to locate an elbow")
    q = 0
    for _ in range(n_elbows):
        if x.shape[0] - q < 2 or (q and np.max(np.abs(x[q:])) <= 1e-8 * abs(x[0])):
            break
        q += _first_elbow(x[q:])
    if max_rank is not None:
        q = min(q, max_rank)
    return q


def joint_embed(Ys: Sequence, K_tilde: int) -> JointEmbedding:
    """Leading ``K_tilde`` left singular vectors of the column-concatenated layers."""
    blocks = [Y.rows if isinstance(Y, EmbeddingMatrix) else np.asarray(Y, float) for Y in Ys]
    if not blocks:
        raise ValueError("need at least one layer embedding")
    n = blocks[0].shape[0]
    if any(b.shape[0] != n for b in blocks):
        raise ValueError("layer embeddings must all have the same number of rows")
    total = sum(b.shape[1] for b in blocks)
    if not 1 <= K_tilde <= min(n, total):
        raise ValueError(f"K_tilde must be in [1, {min(n, total)}], got {K_tilde}")
    svd = truncated_svd(np.hstack(blocks), K_tilde)
    return JointEmbedding(EmbeddingMatrix(svd.left, "joint_U"), svd.singular,
                          tuple(b.shape[1] for b in blocks), K_tilde)


def _resolve_ranks(layers, per_layer_ranks, K):
    L = len(layers)
    if per_layer_ranks is None:
        return [K] * L
    if isinstance(per_layer_ranks, str):
        if per_layer_ranks != "auto":
            raise ValueError("per_layer_ranks must be an int, a sequence or 'auto'")
        return [select_rank_elbow(eigenvalue_magnitudes(A), n_elbows=2) for A in layers]
    if np.isscalar(per_layer_ranks):
        return [int(per_layer_ranks)] * L
    ranks = [int(r) for r in per_layer_ranks]
    if len(ranks) != L:
        raise ValueError(f"got {len(ranks)} ranks for {L} layers")
    return ranks


def dcmase_embed(layers: Sequence, K: int, per_layer_ranks=None, K_tilde=None):
    """Steps 1-3 of DC-MASE; returns ``(joint, layer_embeddings)``.

    ``per_layer_ranks`` and ``K_tilde`` default to ``K``; pass ``"auto"`` to
    pick them from scree elbows.  Both scree profiles are led by one large
    value, so the second elbow is used (of each layer's |eigenvalues| and of
    the concatenation's singular values).
    """
    layers = [check_symmetric(A, name=f"layer {l}") for l, A in enumerate(layers)]
    if not layers:
        raise ValueError("need at least one layer")
    n = layers[0].shape[0]
    if any(A.shape != (n, n) for A in layers):
        raise ValueError("all layers must have the same shape")
    if not 1 <= K <= n:
        raise ValueError(f"K must be in [1, {n}], got {K}")
    ranks = _resolve_ranks(layers, per_layer_ranks, K)
    Ys = tuple(spherical_normalize(scaled_embedding(A, k)) for A, k in zip(layers, ranks))
    if K_tilde is None:
        K_tilde = K
    elif K_tilde == "auto":
        s = np.linalg.svd(np.hstack([Y.rows for Y in Ys]), compute_uv=False)
        K_tilde = select_rank_elbow(s, n_elbows=2) if s.shape[0] >= 2 else 1
    K_tilde = int(K_tilde)
    if K_tilde < K:
        warnings.warn(f"K_tilde={K_tilde} < K={K}; communities may not be separable",
                      stacklevel=2)
    return joint_embed(Ys, K_tilde), Ys


def dcmase(layers: Sequence, K: int, per_layer_ranks=None, K_tilde=None,
           cluster: KMeansConfig | None = None) -> DCMASEResult:
    """Degree-corrected multiple adjacency spectral embedding + K-means.

    Vertices whose spherical rows are zero in every layer (e.g. isolated in
    all layers) are left out of K-means and attached to the nearest centroid.
    """
    joint, Ys = dcmase_embed(layers, K, per_layer_ranks, K_tilde)
    dead = set.intersection(*(set(Y.zero_rows) for Y in Ys))
    result = cluster_rows(joint.U.rows, K, cluster, exclude=sorted(dead))
    return DCMASEResult(result.labels, joint, result, Ys)
