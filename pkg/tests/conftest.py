import numpy as np
import pytest


def random_amplitudes(rng: np.random.Generator, d: int, sparsity: float = 0.0) -> np.ndarray:
    """Random valid damping amplitudes: nonnegative, upper triangular, unit columns."""
    c = np.triu(rng.random((d, d)))
    if sparsity:
        c *= np.triu(rng.random((d, d)) >= sparsity)
    c[np.diag_indices(d)] += 1e-3
    return c / np.linalg.norm(c, axis=0)


def random_corpus(per_dim: int = 100, dims=range(2, 9), seed: int = 20240601):
    rng = np.random.default_rng(seed)
    out = []
    for d in dims:
        for k in range(per_dim):
            out.append(random_amplitudes(rng, d, sparsity=0.5 if k % 2 else 0.0))
    return out


@pytest.fixture(scope="session")
def corpus():
    return random_corpus()
