"""Dense symmetric eigendecomposition and truncated SVD kernels.

Both kernels return deterministic output: eigenpairs are ordered by
decreasing magnitude (ties broken by signed value, descending) and every
singular/eigen vector is sign-fixed so that its largest-magnitude entry is
positive (first such entry on ties).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SYMMETRY_TOL = 1e-9


@dataclass(frozen=True)
class SpectralDecomposition:
    """Leading eigenpairs of a symmetric matrix.

    Attributes
    ----------
    values : ndarray, shape (k,)
        Eigenvalues ordered by descending absolute value.
    vectors : ndarray, shape (n, k)
        Orthonormal eigenvectors, column ``j`` paired with ``values[j]``.
    """

    values: np.ndarray
    vectors: np.ndarray

    @property
    def k(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        """Number of retained non-negative eigenvalues."""
        return int(np.count_nonzero(self.values >= 0))

    @property
    def q(self) -> int:
        """Number of retained negative eigenvalues."""
        return int(np.count_nonzero(self.values < 0))

    @property
    def signs(self) -> np.ndarray:
        """Diagonal of the +-1 sign matrix (zero eigenvalues count as +1)."""
        return np.where(self.values >= 0, 1.0, -1.0)

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.T


@dataclass(frozen=True)
class SvdResult:
    left: np.ndarray
    singular: np.ndarray
    right: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.left * self.singular) @ self.right.T


def _as_finite_matrix(M, name="matrix") -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError(f"{name} has non-finite entries")
    return M


def check_symmetric(S, tol: float = SYMMETRY_TOL, name="matrix") -> np.ndarray:
    """Return ``S`` as a float array, raising if it is not square symmetric.

    The tolerance is absolute for matrices with entries of order one and
    scales with the largest entry otherwise (weighted layers).
    """
    S = _as_finite_matrix(S, name)
    if S.shape[0] != S.shape[1]:
        raise ValueError(f"{name} must be square, got shape {S.shape}")
    scale = max(1.0, float(np.max(np.abs(S)))) if S.size else 1.0
    if S.size and np.max(np.abs(S - S.T)) > tol * scale:
        raise ValueError(f"{name} is not symmetric (tolerance {tol})")
    return S


def column_signs(vectors: np.ndarray) -> np.ndarray:
    """+-1 per column making the largest-magnitude entry positive."""
    if vectors.size == 0:
        return np.ones(vectors.shape[1])
    pivots = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[pivots, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return signs


def fix_signs(vectors: np.ndarray) -> np.ndarray:
    return vectors * column_signs(vectors)


def magnitude_order(values: np.ndarray) -> np.ndarray:
    """Indices sorting ``values`` by |value| descending, then value descending."""
    return np.lexsort((-values, -np.abs(values)))


def top_eigenpairs(S, k: int) -> SpectralDecomposition:
    """The ``k`` eigenpairs of largest magnitude of a symmetric matrix.

    Parameters
    ----------
    S : array_like, shape (n, n)
        Symmetric real matrix (checked to within ``SYMMETRY_TOL``).
    k : int
        Number of eigenpairs to keep, ``1 <= k <= n``.

    Returns
    -------
    SpectralDecomposition
    """
    S = check_symmetric(S)
    n = S.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    values, vectors = np.linalg.eigh(0.5 * (S + S.T))
    idx = magnitude_order(values)[:k]
    return SpectralDecomposition(values[idx], fix_signs(vectors[:, idx]))


def eigenvalue_magnitudes(S) -> np.ndarray:
    """All |eigenvalues| of a symmetric matrix, descending (scree values)."""
    S = check_symmetric(S)
    return np.sort(np.abs(np.linalg.eigvalsh(0.5 * (S + S.T))))[::-1]


def truncated_svd(M, k: int) -> SvdResult:
    """Best rank-``k`` approximation of ``M`` in Frobenius norm.

    Left singular vectors carry the sign convention; right vectors are
    flipped to match so that ``left @ diag(singular) @ right.T`` is
    unchanged.
    """
    M = _as_finite_matrix(M)
    r = min(M.shape)
    if not 1 <= k <= r:
        raise ValueError(f"k must be in [1, {r}], got {k}")
    U, s, Vt = np.linalg.svd(M, full_matrices=False)
    U, s, V = U[:, :k], s[:k], Vt[:k].T
    signs = column_signs(U)
    return SvdResult(U * signs, s, V * signs)
