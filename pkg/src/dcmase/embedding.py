"""Per-layer scaled adjacency spectral embedding and spherical projection."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral import top_eigenpairs

KINDS = ("scaled_X", "spherical_Y", "joint_U")


@dataclass(frozen=True)
class EmbeddingMatrix:
    """Vertex representations, one row per vertex.

    ``zero_rows`` lists rows whose norm fell below the zero tolerance during
    spherical projection; they stay zero in ``rows``.
    """

    rows: np.ndarray
    kind: str
    zero_rows: tuple[int, ...] = ()
    values: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        rows = np.asarray(self.rows, dtype=float)
        if rows.ndim != 2 or rows.shape[1] < 1:
            raise ValueError("embedding must be an (n, d) array with d >= 1")
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    @property
    def d(self) -> int:
        return self.rows.shape[1]


def scaled_embedding(A, k: int) -> EmbeddingMatrix:
    """``U |Lambda|^{1/2}`` from the ``k`` largest-magnitude eigenpairs of ``A``."""
    dec = top_eigenpairs(A, k)
    return EmbeddingMatrix(dec.vectors * np.sqrt(np.abs(dec.values)), "scaled_X",
                           values=dec.values)


def spherical_normalize(X, zero_tol: float | None = None) -> EmbeddingMatrix:
    """Project every row onto the unit sphere.

    Rows with norm below ``zero_tol`` (default ``1e-10`` times the largest
    row norm) are left at zero and reported in ``zero_rows``.
    """
    rows = X.rows if isinstance(X, EmbeddingMatrix) else np.asarray(X, dtype=float)
    norms = np.linalg.norm(rows, axis=1)
    if zero_tol is None:
        zero_tol = 1e-10 * (norms.max() if norms.size else 0.0)
    zero = (norms < zero_tol) | (norms == 0)
    Y = np.zeros_like(rows)
    Y[~zero] = rows[~zero] / norms[~zero, None]
    return EmbeddingMatrix(Y, "spherical_Y", tuple(int(i) for i in np.flatnonzero(zero)))
