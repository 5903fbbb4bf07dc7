import numpy as np
import pytest

from ritzmaj.harness.generators import gen_hermitian, gen_subspace, trial_rng
from ritzmaj.subspaces import Subspace

S2 = 1 / np.sqrt(2)


def e(n, *idx):
    """Orthonormal coordinate basis ``[e_i, ...]`` (0-based)."""
    return Subspace(np.eye(n, dtype=complex)[:, list(idx)])


def span(*cols):
    return Subspace.from_matrix(np.column_stack(cols).astype(complex))


@pytest.fixture
def rng():
    return trial_rng(1234, 0)


def random_cases(count, seed=7, n_max=9):
    """Yield ``(A, X, Y)`` triples of equal-dimension random subspaces."""
    for t in range(count):
        r = trial_rng(seed, t)
        n = int(r.integers(2, n_max + 1))
        p = int(r.integers(1, max(1, n // 2) + 1))
        kind = "real" if t % 2 == 0 else "complex"
        yield gen_hermitian(r, n, kind), gen_subspace(r, n, p, kind), gen_subspace(r, n, p, kind)
