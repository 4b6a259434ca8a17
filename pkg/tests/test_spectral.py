import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dcmase.spectral import top_eigenpairs, truncated_svd

from conftest import principal_angle_sines, random_symmetric


def jacobi_eigenvalues(S, sweeps=100):
    """Cyclic Jacobi rotations; independent of LAPACK."""
    A = np.array(S, dtype=float)
    n = A.shape[0]
    for _ in range(sweeps):
        off = np.sqrt(np.sum(A**2) - np.sum(np.diag(A) ** 2))
        if off < 1e-14 * max(1.0, np.linalg.norm(A)):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(A[p, q]) < 1e-300:
                    continue
                tau = (A[q, q] - A[p, p]) / (2 * A[p, q])
                t = np.sign(tau) / (abs(tau) + np.sqrt(1 + tau**2)) if tau != 0 else 1.0
                c = 1 / np.sqrt(1 + t**2)
                s = t * c
                J = np.eye(n)
                J[p, p] = J[q, q] = c
                J[p, q], J[q, p] = s, -s
                A = J.T @ A @ J
    return np.diag(A)


def test_identity_single_pair():
    dec = top_eigenpairs(np.eye(2), 1)
    assert dec.values.tolist() == [1.0]
    assert np.linalg.norm(dec.vectors[:, 0]) == pytest.approx(1.0)


def test_swap_matrix_signature():
    dec = top_eigenpairs([[0.0, 1.0], [1.0, 0.0]], 2)
    np.testing.assert_allclose(dec.values, [1.0, -1.0], atol=1e-14)
    r = 1 / np.sqrt(2)
    assert abs(abs(dec.vectors[:, 0] @ [r, r]) - 1) < 1e-12
    assert abs(abs(dec.vectors[:, 1] @ [r, -r]) - 1) < 1e-12
    assert (dec.p, dec.q) == (1, 1)
    np.testing.assert_array_equal(dec.signs, [1.0, -1.0])


def test_full_reconstruction_seeded(rng):
    S = random_symmetric(rng, 6)
    dec = top_eigenpairs(S, 6)
    assert np.linalg.norm(S - dec.reconstruct()) <= 1e-9


def test_eigenvalues_match_jacobi_oracle(rng):
    for _ in range(5):
        S = random_symmetric(rng, 7)
        ours = np.sort(top_eigenpairs(S, 7).values)
        np.testing.assert_allclose(ours, np.sort(jacobi_eigenvalues(S)), atol=1e-10)


def test_magnitude_order_and_tie_break():
    S = np.diag([-3.0, 1.0, 3.0, -0.5])
    dec = top_eigenpairs(S, 4)
    np.testing.assert_allclose(dec.values, [3.0, -3.0, 1.0, -0.5])
    assert (dec.p, dec.q) == (2, 2)


def test_sign_convention_largest_entry_positive(rng):
    dec = top_eigenpairs(random_symmetric(rng, 9), 4)
    for j in range(4):
        v = dec.vectors[:, j]
        assert v[np.argmax(np.abs(v))] > 0


def test_deterministic(rng):
    S = random_symmetric(rng, 10)
    a, b = top_eigenpairs(S, 3), top_eigenpairs(S.copy(), 3)
    np.testing.assert_array_equal(a.vectors, b.vectors)


@pytest.mark.parametrize("bad, k", [
    (np.array([[1.0, 2.0], [0.0, 1.0]]), 1),
    (np.eye(3), 4),
    (np.eye(3), 0),
    (np.array([[np.nan, 0.0], [0.0, 1.0]]), 1),
])
def test_top_eigenpairs_errors(bad, k):
    with pytest.raises(ValueError):
        top_eigenpairs(bad, k)


@pytest.mark.parametrize("eta", [0.1, 0.4, 0.9])
def test_two_block_eigenvalues(eta):
    dec = top_eigenpairs([[1.0, 1 - eta], [1 - eta, 1.0]], 2)
    np.testing.assert_allclose(np.sort(dec.values), np.sort([2 - eta, eta]), atol=1e-12)


def test_svd_identity():
    res = truncated_svd(np.eye(3), 2)
    np.testing.assert_allclose(res.singular, [1.0, 1.0])


def test_svd_rank_one():
    u = np.array([2.0, 0.0, 0.0])
    v = np.array([0.0, 3.0])
    res = truncated_svd(np.outer(u, v), 1)
    assert res.singular[0] == pytest.approx(6.0, abs=1e-12)


def test_svd_full_against_gram_oracle(rng):
    M = rng.standard_normal((8, 5))
    res = truncated_svd(M, 5)
    assert np.linalg.norm(M - res.reconstruct()) <= 1e-9
    # oracle: singular values from the eigenvalues of M^T M (Jacobi, not LAPACK)
    gram = np.sort(jacobi_eigenvalues(M.T @ M))[::-1]
    np.testing.assert_allclose(res.singular, np.sqrt(gram), atol=1e-9)
    np.testing.assert_allclose(res.left.T @ res.left, np.eye(5), atol=1e-10)
    np.testing.assert_allclose(res.right.T @ res.right, np.eye(5), atol=1e-10)


def test_svd_left_vectors_span_gram_eigenspace(rng):
    for _ in range(10):
        U, _ = np.linalg.qr(rng.standard_normal((12, 6)))
        V, _ = np.linalg.qr(rng.standard_normal((7, 6)))
        s = np.array([5.0, 4.0, 3.0, 1.0, 0.5, 0.1])
        M = (U * s) @ V.T
        res = truncated_svd(M, 3)
        eig = top_eigenpairs(M @ M.T, 3)
        assert principal_angle_sines(res.left, eig.vectors) <= 1e-8


@pytest.mark.parametrize("k", [0, 6])
def test_svd_errors(k):
    with pytest.raises(ValueError):
        truncated_svd(np.ones((5, 4)), k)
    with pytest.raises(ValueError):
        truncated_svd(np.array([[np.inf, 1.0]]), 1)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 12), seed=st.integers(0, 2**32 - 1))
def test_eigen_invariants(n, seed):
    S = random_symmetric(np.random.default_rng(seed), n)
    k = max(1, n // 2)
    dec = top_eigenpairs(S, k)
    np.testing.assert_allclose(dec.vectors.T @ dec.vectors, np.eye(k), atol=1e-10)
    assert np.all(np.diff(np.abs(dec.values)) <= 1e-12)
    assert dec.p + dec.q == k
    full = top_eigenpairs(S, n)
    assert np.linalg.norm(S - full.reconstruct()) <= 1e-9 * max(np.linalg.norm(S), 1e-300)
