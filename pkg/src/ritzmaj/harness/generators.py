"""Seeded random test problems.

Every trial draws from its own PCG64 stream keyed by ``(seed, trial_id)``
through :class:`numpy.random.SeedSequence`, so results do not depend on
execution order or on how trials are split across workers.
"""

from __future__ import annotations

import numpy as np

from ..numeric import eigh, orthonormal_basis
from ..subspaces import Subspace

__all__ = [
    "trial_rng",
    "gaussian",
    "gen_hermitian",
    "gen_subspace",
    "gen_invariant_subspace",
    "gen_unitary",
]


def trial_rng(seed: int, trial_id: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), int(trial_id)])))


def gaussian(rng: np.random.Generator, shape, kind: str = "real") -> np.ndarray:
    if kind == "real":
        return rng.standard_normal(shape).astype(np.complex128)
    if kind == "complex":
        return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    raise ValueError(f"unknown scalar kind {kind!r}")


def gen_hermitian(rng: np.random.Generator, n: int, kind: str = "real") -> np.ndarray:
    """``(M + M^H) / 2`` for an i.i.d. standard normal ``M``."""
    if n < 1:
        raise ValueError("n must be positive")
    M = gaussian(rng, (n, n), kind)
    return 0.5 * (M + M.conj().T)


def gen_subspace(rng: np.random.Generator, n: int, p: int, kind: str = "real") -> Subspace:
    if not 1 <= p <= n:
        raise ValueError(f"need 1 <= p <= n, got p={p}, n={n}")
    return Subspace(orthonormal_basis(gaussian(rng, (n, p), kind)))


def gen_invariant_subspace(rng: np.random.Generator, A, p: int) -> Subspace:
    """Span of ``p`` eigenvectors of ``A`` chosen uniformly at random."""
    _, V = eigh(A)
    n = V.shape[0]
    if not 1 <= p <= n:
        raise ValueError(f"need 1 <= p <= n, got p={p}, n={n}")
    idx = np.sort(rng.choice(n, size=p, replace=False))
    return Subspace(V[:, idx])


def gen_unitary(rng: np.random.Generator, n: int, kind: str = "real") -> np.ndarray:
    Q, R = np.linalg.qr(gaussian(rng, (n, n), kind))
    d = np.diag(R)
    return Q * (d / np.abs(d))
