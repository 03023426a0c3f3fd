import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def brute_force_nd_max(entries: np.ndarray, trials: int = 40000, seed: int = 0) -> float:
    """Independent oracle for constrained negative definiteness.

    Approximates max c^T N c over unit vectors with sum(c) = 0 by random
    search in the constraint subspace; never touches the projected
    eigensolve used by the implementation.
    """
    rng = np.random.default_rng(seed)
    n = entries.shape[0]
    best = -np.inf
    batch = 1000
    for _ in range(trials // batch):
        C = rng.standard_normal((batch, n))
        C -= C.mean(axis=1, keepdims=True)
        norms = np.linalg.norm(C, axis=1)
        C = C[norms > 1e-9] / norms[norms > 1e-9, None]
        vals = np.einsum("bi,ij,bj->b", C, entries, C)
        best = max(best, float(vals.max()))
    return best


def leading_principal_minors(entries: np.ndarray) -> list[float]:
    """Determinants of the nested upper-left blocks (Sylvester oracle)."""
    return [float(np.linalg.det(entries[: k + 1, : k + 1]))
            for k in range(entries.shape[0])]
