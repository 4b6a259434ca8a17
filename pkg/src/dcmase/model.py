"""Multilayer degree-corrected stochastic blockmodel.

Each layer ``l`` has expected adjacency

    P[l] = diag(theta[l]) Z B[l] Z^T diag(theta[l])

with a membership matrix ``Z`` shared by all layers.  Community labels are
0-based integers throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .spectral import check_symmetric, top_eigenpairs

EDGE_MODES = ("bernoulli", "poisson", "clipped")
RANK_TOL = 1e-8
IDENTIFIABILITY_TOL = 1e-6


def make_rng(*key: int) -> np.random.Generator:
    """Counter-based (Philox) generator keyed by a tuple of integers.

    ``make_rng(seed, layer, rep)`` gives the same stream on every platform
    and independent streams for distinct keys.
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(k) for k in key])))


@dataclass(frozen=True)
class CommunityAssignment:
    """Vertex-to-community map with every community non-empty."""

    labels: np.ndarray
    K: int

    def __post_init__(self):
        labels = np.asarray(self.labels)
        if labels.ndim != 1 or labels.size == 0:
            raise ValueError("labels must be a non-empty 1-d sequence")
        if not np.issubdtype(labels.dtype, np.integer):
            if not np.all(labels == np.round(labels)):
                raise ValueError("labels must be integers")
            labels = labels.astype(int)
        if labels.min() < 0 or labels.max() >= self.K:
            raise ValueError(f"labels must lie in [0, {self.K - 1}]")
        missing = np.setdiff1d(np.arange(self.K), labels)
        if missing.size:
            raise ValueError(f"communities {missing.tolist()} have no vertices")
        labels = labels.copy()
        labels.flags.writeable = False
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_sizes(cls, sizes: Sequence[int]) -> "CommunityAssignment":
        """Contiguous blocks: the first ``sizes[0]`` vertices in community 0, ..."""
        return cls(np.repeat(np.arange(len(sizes)), sizes), len(sizes))

    @classmethod
    def balanced(cls, n: int, K: int) -> "CommunityAssignment":
        return cls(np.arange(n) * K // n, K)

    @property
    def n(self) -> int:
        return self.labels.shape[0]

    @property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.K)

    @property
    def Z(self) -> np.ndarray:
        return membership_matrix(self.labels, self.K)


def membership_matrix(labels, K: int | None = None) -> np.ndarray:
    labels = np.asarray(labels, dtype=int)
    K = int(labels.max()) + 1 if K is None else K
    Z = np.zeros((labels.shape[0], K))
    Z[np.arange(labels.shape[0]), labels] = 1.0
    return Z


@dataclass(frozen=True)
class MultilayerModel:
    """Parameters of a multilayer DCSBM.

    Attributes
    ----------
    assignment : CommunityAssignment
    theta : ndarray, shape (L, n)
        Positive degree corrections per layer.
    B : ndarray, shape (L, K, K)
        Symmetric non-negative block matrices.
    edge_mode : {"bernoulli", "poisson", "clipped"}
        ``clipped`` samples Bernoulli(min(P, 1)) and places no bound on P.
    """

    assignment: CommunityAssignment
    theta: np.ndarray
    B: np.ndarray
    edge_mode: str = "bernoulli"

    def __post_init__(self):
        theta = np.array(self.theta, dtype=float, ndmin=2)
        B = np.array(self.B, dtype=float)
        if B.ndim == 2:
            B = B[None]
        n, K = self.assignment.n, self.assignment.K
        if theta.shape[1] != n:
            raise ValueError(f"theta has {theta.shape[1]} vertices, labels have {n}")
        if B.shape[1:] != (K, K):
            raise ValueError(f"B matrices must be {K}x{K}, got {B.shape[1:]}")
        if theta.shape[0] != B.shape[0]:
            raise ValueError("theta and B disagree on the number of layers")
        if not np.all(np.isfinite(theta)) or np.any(theta <= 0):
            raise ValueError("degree corrections must be finite and positive")
        for l in range(B.shape[0]):
            check_symmetric(B[l], name=f"B[{l}]")
        if np.any(B < 0):
            raise ValueError("block matrices must be non-negative")
        if self.edge_mode not in EDGE_MODES:
            raise ValueError(f"edge_mode must be one of {EDGE_MODES}")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "B", 0.5 * (B + np.swapaxes(B, 1, 2)))

    @property
    def n(self) -> int:
        return self.assignment.n

    @property
    def K(self) -> int:
        return self.assignment.K

    @property
    def L(self) -> int:
        return self.theta.shape[0]

    @property
    def labels(self) -> np.ndarray:
        return self.assignment.labels

    def expected_matrix(self, l: int) -> np.ndarray:
        return expected_matrix(self, l)

    def expected_matrices(self) -> list[np.ndarray]:
        return [expected_matrix(self, l) for l in range(self.L)]

    def sample(self, seed: int = 0, rep: int = 0) -> list[np.ndarray]:
        """One draw of all layers; layer ``l`` uses stream ``(seed, rep, l)``."""
        return [
            sample_layer(self.expected_matrix(l), self.edge_mode, make_rng(seed, rep, l))
            for l in range(self.L)
        ]


def expected_matrix(model: MultilayerModel, l: int) -> np.ndarray:
    """Expected adjacency of layer ``l`` (0-based), self-loops included."""
    if not 0 <= l < model.L:
        raise IndexError(f"layer {l} out of range for L={model.L}")
    theta = model.theta[l]
    z = model.labels
    P = np.outer(theta, theta) * model.B[l][np.ix_(z, z)]
    if model.edge_mode == "bernoulli" and P.max() > 1.0:
        raise ValueError(
            f"layer {l}: expected entry {P.max():.4g} exceeds 1 in bernoulli mode"
        )
    return P


def average_degree(P) -> float:
    return float(np.asarray(P).sum(axis=1).mean())


def rescale_to_average_degree(model: MultilayerModel, target: float) -> MultilayerModel:
    """Scale each layer so its mean expected degree equals ``target``.

    The per-layer factor ``alpha`` multiplies every entry of ``P``; it is
    absorbed into the degree corrections as ``sqrt(alpha)``.
    """
    if not target > 0:
        raise ValueError("target degree must be positive")
    theta = model.theta.copy()
    z = model.labels
    for l in range(model.L):
        P = np.outer(theta[l], theta[l]) * model.B[l][np.ix_(z, z)]
        current = average_degree(P)
        if current <= 0:
            raise ValueError(f"layer {l} has no expected edges to rescale")
        alpha = target / current
        if model.edge_mode == "bernoulli" and alpha * P.max() > 1.0:
            raise ValueError(
                f"layer {l}: average degree {target} needs a probability of "
                f"{alpha * P.max():.4g} > 1"
            )
        theta[l] *= np.sqrt(alpha)
    return replace(model, theta=theta)


def sample_layer(P, mode: str = "bernoulli", seed=0) -> np.ndarray:
    """Sample a symmetric adjacency matrix with independent upper triangle.

    Parameters
    ----------
    P : array_like, shape (n, n)
        Symmetric matrix of edge expectations.
    mode : {"bernoulli", "poisson", "clipped"}
    seed : int or numpy Generator
    """
    P = check_symmetric(P, name="P")
    rng = seed if isinstance(seed, np.random.Generator) else make_rng(seed)
    if mode not in EDGE_MODES:
        raise ValueError(f"mode must be one of {EDGE_MODES}")
    if np.any(P < 0):
        raise ValueError("edge expectations must be non-negative")
    if mode == "bernoulli" and np.any(P > 1):
        raise ValueError("bernoulli probabilities must lie in [0, 1]")
    n = P.shape[0]
    iu = np.triu_indices(n)
    p = P[iu]
    if mode == "poisson":
        draws = rng.poisson(p).astype(float)
    else:
        draws = (rng.random(p.shape[0]) < np.minimum(p, 1.0)).astype(float)
    A = np.zeros((n, n))
    A[iu] = draws
    return A + np.triu(A, 1).T


@dataclass(frozen=True)
class IdentifiabilityResult:
    identifiable: bool
    Q: np.ndarray
    witness: tuple[int, int] | None = None
    ranks: tuple[int, ...] = field(default_factory=tuple)

    def __bool__(self) -> bool:
        return self.identifiable


def numerical_rank(values: np.ndarray, rank_tol: float = RANK_TOL) -> int:
    values = np.abs(np.asarray(values))
    if values.size == 0 or values.max() == 0:
        return 0
    return int(np.count_nonzero(values > rank_tol * values.max()))


def normalized_eigvec_rows(B, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Rows of the rank-``K_l`` eigenvector matrix of ``B``, scaled to unit norm."""
    dec = top_eigenpairs(B, B.shape[0])
    V = dec.vectors[:, : numerical_rank(dec.values, rank_tol)]
    norms = np.linalg.norm(V, axis=1, keepdims=True)
    return np.divide(V, norms, out=np.zeros_like(V), where=norms > 0)


def check_identifiability(
    B: Sequence, tol: float = IDENTIFIABILITY_TOL, rank_tol: float = RANK_TOL
) -> IdentifiabilityResult:
    """Test whether memberships are identifiable from the block matrices.

    Stacks the row-normalized eigenvector matrices of every ``B[l]`` side by
    side and checks that all ``K`` rows are pairwise distinct (Euclidean
    distance above ``tol``).  When not identifiable, ``witness`` holds the
    first coinciding community pair.
    """
    mats = [check_symmetric(b, name="B") for b in np.array(B, dtype=float, ndmin=3)]
    blocks = [normalized_eigvec_rows(b, rank_tol) for b in mats]
    Q = np.hstack(blocks)
    K = Q.shape[0]
    ranks = tuple(b.shape[1] for b in blocks)
    for r in range(K):
        for s in range(r + 1, K):
            if np.linalg.norm(Q[r] - Q[s]) <= tol:
                return IdentifiabilityResult(False, Q, (r, s), ranks)
    return IdentifiabilityResult(True, Q, None, ranks)


@dataclass(frozen=True)
class PopulationDiagnostics:
    lambda_min: np.ndarray
    lambda_bar: float
    snr: np.ndarray
    err_ave: np.ndarray
    err_max: np.ndarray


def block_lambda_min(B, rank_tol: float = RANK_TOL) -> float:
    """Smallest eigenvalue magnitude of a full-rank block matrix."""
    values = np.linalg.eigvalsh(check_symmetric(B, name="B"))
    if numerical_rank(values, rank_tol) < values.shape[0]:
        raise ValueError("block matrix is rank deficient; lambda_min is undefined")
    return float(np.min(np.abs(values)))


def population_diagnostics(model: MultilayerModel) -> PopulationDiagnostics:
    """Signal-strength summaries of a model with full-rank block matrices.

    ``err_ave[i]`` averages ``||theta||_3^3 / (theta_i ||theta||^4 lambda_min)``
    over layers, ``err_max[i]`` maximises
    ``theta_max / (theta_i ||theta||^2 sqrt(lambda_min))`` and
    ``snr[l] = sqrt(theta_min / theta_max) * sqrt(lambda_min) * ||theta||``.
    """
    lam = np.array([block_lambda_min(b) for b in model.B])
    th = model.theta
    norm2 = np.linalg.norm(th, axis=1)
    cube = np.sum(th**3, axis=1)
    tmin, tmax = th.min(axis=1), th.max(axis=1)
    ave_terms = cube[:, None] / (th * norm2[:, None] ** 4 * lam[:, None])
    max_terms = tmax[:, None] / (th * norm2[:, None] ** 2 * np.sqrt(lam)[:, None])
    snr = np.sqrt(tmin / tmax) * np.sqrt(lam) * norm2
    return PopulationDiagnostics(
        lambda_min=lam,
        lambda_bar=float(lam.mean()),
        snr=snr,
        err_ave=ave_terms.mean(axis=0),
        err_max=max_terms.max(axis=0),
    )
