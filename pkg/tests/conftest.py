import numpy as np
import pytest

from dcmase.model import CommunityAssignment, MultilayerModel, check_identifiability


def random_symmetric(rng, n):
    M = rng.standard_normal((n, n))
    return M + M.T


def random_identifiable_model(rng, sizes, L, ranks=None, edge_mode="bernoulli"):
    """Model with low-rank positive block matrices and theta in [0.2, 1]."""
    K = len(sizes)
    ranks = ranks or [K] * L
    while True:
        Bs = []
        for r in ranks:
            X = rng.uniform(0.1, 1.0, size=(K, r))
            B = X @ X.T
            Bs.append(B / B.max())
        if check_identifiability(Bs):
            break
    theta = rng.uniform(0.2, 1.0, size=(L, sum(sizes)))
    return MultilayerModel(CommunityAssignment.from_sizes(sizes), theta, np.array(Bs), edge_mode)


def principal_angle_sines(U, V):
    """Largest sine of the principal angles between two column spaces."""
    Qu, _ = np.linalg.qr(U)
    Qv, _ = np.linalg.qr(V)
    residual = Qv - Qu @ (Qu.T @ Qv)
    return float(np.linalg.norm(residual, 2))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
