"""K-means with k-means++ restarts and partition-agreement metrics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .model import make_rng


@dataclass(frozen=True)
class KMeansConfig:
    restarts: int = 50
    max_iter: int = 300
    tol: float = 1e-10
    seed: int = 0


@dataclass(frozen=True)
class ClusteringResult:
    labels: np.ndarray
    centroids: np.ndarray
    objective: float
    restarts_used: int
    seed: int
    empty_clusters: tuple[int, ...] = ()
    duplicate_centroids: bool = False


def _sq_dists(points, centers):
    d = (
        np.sum(points**2, axis=1)[:, None]
        - 2.0 * points @ centers.T
        + np.sum(centers**2, axis=1)[None, :]
    )
    return np.maximum(d, 0.0)


def kmeans_plus_plus(points: np.ndarray, K: int, rng: np.random.Generator) -> np.ndarray:
    """D^2-weighted seeding; falls back to uniform picks once all mass is zero."""
    n = points.shape[0]
    centers = np.empty((K, points.shape[1]))
    centers[0] = points[rng.integers(n)]
    closest = np.sum((points - centers[0]) ** 2, axis=1)
    for k in range(1, K):
        total = closest.sum()
        if total > 0:
            idx = rng.choice(n, p=closest / total)
        else:
            idx = rng.integers(n)
        centers[k] = points[idx]
        closest = np.minimum(closest, np.sum((points - centers[k]) ** 2, axis=1))
    return centers


def lloyd(points: np.ndarray, centers: np.ndarray, max_iter: int = 300, tol: float = 1e-10):
    """Lloyd iterations from the given centers.

    Returns ``(labels, centers, objective, trace)`` where ``trace`` holds the
    objective after every assignment step.  An emptied cluster is re-seeded
    at the point farthest from its current centroid.
    """
    centers = centers.copy()
    K = centers.shape[0]
    trace = []
    for _ in range(max_iter):
        d = _sq_dists(points, centers)
        labels = np.argmin(d, axis=1)
        within = d[np.arange(points.shape[0]), labels]
        trace.append(float(within.sum()))
        new = centers.copy()
        counts = np.bincount(labels, minlength=K)
        for k in range(K):
            if counts[k]:
                new[k] = points[labels == k].mean(axis=0)
        for k in np.flatnonzero(counts == 0):
            far = int(np.argmax(within))
            if within[far] <= 0:
                break
            new[k] = points[far]
            within[far] = 0.0
        shift = float(np.sum((new - centers) ** 2))
        centers = new
        if shift <= tol:
            break
    d = _sq_dists(points, centers)
    labels = np.argmin(d, axis=1)
    objective = float(d[np.arange(points.shape[0]), labels].sum())
    trace.append(objective)
    return labels, centers, objective, trace


def kmeans(points, K: int, restarts: int = 50, max_iter: int = 300, seed: int = 0,
           tol: float = 1e-10) -> ClusteringResult:
    """Best-of-``restarts`` k-means (k-means++ seeding, Lloyd refinement).

    Deterministic given ``seed``; ties in objective go to the earliest restart.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[1] == 0:
        raise ValueError("points must be an (n, d) array with d >= 1")
    n = points.shape[0]
    if not 1 <= K <= n:
        raise ValueError(f"K must be in [1, {n}], got {K}")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    best = None
    for r in range(restarts):
        rng = make_rng(seed, r)
        labels, centers, obj, _ = lloyd(points, kmeans_plus_plus(points, K, rng), max_iter, tol)
        if best is None or obj < best[2]:
            best = (labels, centers, obj)
    labels, centers, obj = best
    counts = np.bincount(labels, minlength=K)
    empty = tuple(int(k) for k in np.flatnonzero(counts == 0))
    dup = len(np.unique(centers, axis=0)) < K
    return ClusteringResult(labels, centers, obj, restarts, seed, empty, dup)


def cluster_rows(points, K: int, config: KMeansConfig | None = None, exclude=None) -> ClusteringResult:
    """K-means on all rows except ``exclude``; excluded rows join the nearest centroid."""
    config = config or KMeansConfig()
    points = np.asarray(points, dtype=float)
    mask = np.ones(points.shape[0], dtype=bool)
    if exclude is not None and len(exclude):
        mask[np.asarray(list(exclude), dtype=int)] = False
    if mask.sum() < K:
        mask[:] = True
    res = kmeans(points[mask], K, config.restarts, config.max_iter, config.seed, config.tol)
    if mask.all():
        return res
    labels = np.empty(points.shape[0], dtype=int)
    labels[mask] = res.labels
    labels[~mask] = np.argmin(_sq_dists(points[~mask], res.centroids), axis=1)
    objective = float(np.sum((points - res.centroids[labels]) ** 2))
    return ClusteringResult(labels, res.centroids, objective, res.restarts_used, res.seed,
                            res.empty_clusters, res.duplicate_centroids)


def contingency(a, b) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("label vectors must be 1-d and of equal length")
    _, ai = np.unique(a, return_inverse=True)
    _, bi = np.unique(b, return_inverse=True)
    table = np.zeros((ai.max() + 1 if ai.size else 0, bi.max() + 1 if bi.size else 0), dtype=np.int64)
    np.add.at(table, (ai, bi), 1)
    return table


def ari(a, b) -> float:
    """Hubert-Arabie adjusted Rand index.

    Identical trivial partitions (all pairs agree with zero expected
    disagreement) score 1.
    """
    table = contingency(a, b)
    n = table.sum()
    comb = lambda x: x * (x - 1) / 2.0  # noqa: E731
    sum_ij = comb(table).sum()
    sum_a = comb(table.sum(axis=1)).sum()
    sum_b = comb(table.sum(axis=0)).sum()
    total = comb(n)
    expected = sum_a * sum_b / total if total else 0.0
    max_index = 0.5 * (sum_a + sum_b)
    if max_index == expected:
        return 1.0
    return float((sum_ij - expected) / (max_index - expected))


def misclustering_rate(zhat, z) -> float:
    """Fraction of vertices mislabelled under the best label matching."""
    table = contingency(zhat, z)
    rows, cols = linear_sum_assignment(table, maximize=True)
    total = int(table.sum())
    return (total - int(table[rows, cols].sum())) / total
