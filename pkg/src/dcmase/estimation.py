"""Plug-in DCSBM parameter estimates and leave-one-layer-out prediction error.

Estimates use the community-sum normalisation: within each community the
degree corrections of a layer sum to the community size, so they average
to one and ``B_hat[l][r, s]`` is the mean edge weight between communities
``r`` and ``s``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .baselines import run_method
from .clustering import KMeansConfig
from .model import membership_matrix
from .spectral import check_symmetric


@dataclass(frozen=True)
class FittedParameters:
    theta: np.ndarray  # (L, n)
    B: np.ndarray  # (L, K, K)
    labels: np.ndarray

    @property
    def L(self) -> int:
        return self.theta.shape[0]

    @property
    def K(self) -> int:
        return self.B.shape[1]

    def to_dict(self) -> dict:
        return {
            "n": int(self.theta.shape[1]),
            "K": self.K,
            "L": self.L,
            "labels": self.labels.tolist(),
            "theta": self.theta.tolist(),
            "B": self.B.tolist(),
        }

    def to_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2)


def compact_labels(labels) -> np.ndarray:
    """Map arbitrary label ids onto ``0..K-1``, keeping their sorted order."""
    _, inv = np.unique(np.asarray(labels), return_inverse=True)
    return inv.reshape(-1)


def plugin_estimates(layers: Sequence, labels) -> FittedParameters:
    """Degree-ratio and block-average estimates for every layer.

    Raises
    ------
    ValueError
        If some community has zero total degree in some layer.
    """
    labels = compact_labels(labels)
    Z = membership_matrix(labels)
    sizes = Z.sum(axis=0)
    thetas, Bs = [], []
    for l, A in enumerate(layers):
        A = check_symmetric(A, name=f"layer {l}")
        if A.shape[0] != labels.shape[0]:
            raise ValueError(f"layer {l} has {A.shape[0]} vertices, labels have {labels.shape[0]}")
        if np.any(A < 0):
            raise ValueError(f"layer {l} has negative entries")
        d = A.sum(axis=1)
        community_degree = Z.T @ d
        empty = np.flatnonzero(community_degree <= 0)
        if empty.size:
            raise ValueError(f"layer {l}: community {int(empty[0])} has zero total degree")
        thetas.append(d / (community_degree / sizes)[labels])
        B = (Z.T @ A @ Z) / np.outer(sizes, sizes)
        Bs.append(0.5 * (B + B.T))
    return FittedParameters(np.array(thetas), np.array(Bs), labels)


def reconstruct_expectation(params: FittedParameters, labels, l: int) -> np.ndarray:
    labels = compact_labels(labels)
    if labels.shape[0] != params.theta.shape[1]:
        raise ValueError("labels do not match the fitted vertex count")
    theta = params.theta[l]
    return np.outer(theta, theta) * params.B[l][np.ix_(labels, labels)]


def to_unit_diagonal(theta, B, labels):
    """Convert one layer's parameters to the ``B_rr = 1`` convention (same P)."""
    labels = compact_labels(labels)
    diag = np.diag(B).astype(float)
    if np.any(diag <= 0):
        raise ValueError("unit-diagonal form needs positive diagonal blocks")
    root = np.sqrt(diag)
    return np.asarray(theta) * root[labels], np.asarray(B) / np.outer(root, root)


def to_community_sum(theta, B, labels):
    """Convert one layer's parameters so corrections sum to community sizes."""
    labels = compact_labels(labels)
    theta = np.asarray(theta, dtype=float)
    K = labels.max() + 1
    mean = np.bincount(labels, weights=theta, minlength=K) / np.bincount(labels, minlength=K)
    return theta / mean[labels], np.asarray(B) * np.outer(mean, mean)


LabelFitter = Callable[[list, int], np.ndarray]


def _fitter(method, cluster) -> LabelFitter:
    if callable(method):
        return method
    return lambda layers, K: run_method(method, layers, K, cluster).labels


def oos_mse(layers: Sequence, method, K: int, l: int,
            cluster: KMeansConfig | None = None) -> float:
    """Out-of-sample error of layer ``l`` given memberships fitted without it.

    ``method`` is a registry key or a callable ``(layers, K) -> labels``.
    Returns ``||A_l - P_hat_l||_F^2 / n^2``.
    """
    layers = list(layers)
    if len(layers) < 2:
        raise ValueError("need at least two layers to hold one out")
    if not 0 <= l < len(layers):
        raise IndexError(f"layer {l} out of range")
    rest = layers[:l] + layers[l + 1:]
    labels = np.asarray(_fitter(method, cluster)(rest, K))
    held = check_symmetric(layers[l])
    params = plugin_estimates([held], labels)
    P_hat = reconstruct_expectation(params, labels, 0)
    return float(np.sum((held - P_hat) ** 2) / held.shape[0] ** 2)


def mse_table(layers: Sequence, method, K_grid: Sequence[int],
              cluster: KMeansConfig | None = None) -> list[dict]:
    """``MSE(K, l)`` for every ``K`` in the grid and every held-out layer."""
    rows = []
    for K in K_grid:
        for l in range(len(layers)):
            rows.append({"K": int(K), "layer": l, "mse": oos_mse(layers, method, K, l, cluster)})
    return rows
