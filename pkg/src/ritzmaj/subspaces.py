"""Subspaces, orthogonal projectors and principal angles."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DimensionError, NotAcuteError
from .numeric import (
    DEFAULT_POLICY,
    TolerancePolicy,
    as_matrix,
    orthonormal_basis,
    read_matrix,
    svd_decreasing,
)

__all__ = [
    "Subspace",
    "AngleVector",
    "principal_angles",
    "join",
    "project_onto",
    "projector_product_singvals",
    "load_subspace",
]

# accepted deviation of basis^H basis from the identity
ORTHONORMAL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of C^n stored through an orthonormal basis (n x p)."""

    basis: np.ndarray
    policy: TolerancePolicy = field(default=DEFAULT_POLICY, repr=False)

    def __post_init__(self):
        B = as_matrix(self.basis)
        n, p = B.shape
        if p > n:
            raise DimensionError(f"basis has {p} columns in dimension {n}")
        err = float(np.max(np.abs(B.conj().T @ B - np.eye(p))))
        if err > ORTHONORMAL_TOL:
            raise DimensionError(f"basis columns are not orthonormal (error {err:.2e})")
        B.setflags(write=False)
        object.__setattr__(self, "basis", B)

    @classmethod
    def from_matrix(cls, M, tol: float | None = None,
                    policy: TolerancePolicy = DEFAULT_POLICY) -> "Subspace":
        """Span of the columns of ``M`` at the numerical-rank cutoff."""
        return cls(orthonormal_basis(M, tol, policy), policy)

    @property
    def n(self) -> int:
        return self.basis.shape[0]

    @property
    def p(self) -> int:
        return self.basis.shape[1]

    @property
    def dim(self) -> int:
        return self.p

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def complement(self) -> "Subspace":
        from .numeric import complement_basis

        Q = complement_basis(self.basis)
        if Q.shape[1] == 0:
            raise DimensionError("complement of the whole space is empty")
        return Subspace(Q, self.policy)

    def __repr__(self) -> str:
        return f"Subspace(n={self.n}, p={self.p})"


@dataclass(frozen=True)
class AngleVector:
    """Principal angles in decreasing order, with trigonometric views."""

    theta: np.ndarray
    atol: float = 1e-12

    def __post_init__(self):
        t = np.asarray(self.theta, dtype=float)
        t.setflags(write=False)
        object.__setattr__(self, "theta", t)

    def __len__(self) -> int:
        return self.theta.size

    @property
    def max(self) -> float:
        return float(self.theta[0]) if self.theta.size else 0.0

    @property
    def min(self) -> float:
        return float(self.theta[-1]) if self.theta.size else 0.0

    def cos(self) -> np.ndarray:
        return np.cos(self.theta)

    def sin(self) -> np.ndarray:
        return np.sin(self.theta)

    def is_acute(self) -> bool:
        return self.max < math.pi / 2 - self.atol

    def require_acute(self) -> None:
        if not self.is_acute():
            raise NotAcuteError(
                f"subspaces not acute: largest angle {self.max!r} is within "
                f"{self.atol:g} of pi/2"
            )

    def tan(self) -> np.ndarray:
        self.require_acute()
        return np.tan(self.theta)


def _check_same_ambient(X: Subspace, Y: Subspace) -> None:
    if X.n != Y.n:
        raise DimensionError(f"ambient dimensions differ: {X.n} vs {Y.n}")


def principal_angles(X: Subspace, Y: Subspace) -> AngleVector:
    """Principal angles between ``X`` and ``Y``, decreasing.

    Cosines come from the singular values of ``X^H Y``. Angles whose cosine
    exceeds ``sqrt(2)/2`` are recomputed from the sines, the singular values
    of ``(I - P_Y) X`` (smaller subspace projected onto the complement of the
    larger), because arccos is ill-conditioned near zero.
    """
    _check_same_ambient(X, Y)
    A, B = X.basis, Y.basis
    if A.shape[1] > B.shape[1]:
        A, B = B, A
    cos_desc = np.clip(svd_decreasing(A.conj().T @ B), 0.0, 1.0)
    sin_asc = np.clip(svd_decreasing(A - B @ (B.conj().T @ A))[::-1], 0.0, 1.0)
    small = cos_desc**2 > 0.5
    theta_asc = np.where(small, np.arcsin(sin_asc), np.arccos(cos_desc))
    return AngleVector(theta_asc[::-1].copy(), atol=X.policy.atol)


def join(X: Subspace, Y: Subspace) -> Subspace:
    """The sum ``X + Y``; its dimension is detected by the rank cutoff."""
    _check_same_ambient(X, Y)
    return Subspace.from_matrix(np.hstack([X.basis, Y.basis]), policy=X.policy)


def project_onto(S: Subspace, M) -> np.ndarray:
    """Orthogonal projection ``P_S M`` computed as ``B (B^H M)``."""
    A = np.asarray(M, dtype=np.complex128)
    vec = A.ndim == 1
    if vec:
        A = A[:, None]
    if A.shape[0] != S.n:
        raise DimensionError(f"cannot project {A.shape[0]}-vectors onto a subspace of C^{S.n}")
    out = S.basis @ (S.basis.conj().T @ A)
    return out[:, 0] if vec else out


def projector_product_singvals(P: Subspace, Q: Subspace) -> np.ndarray:
    """Singular values of ``(I - P_P) P_Q P_P`` formed as an n x n product.

    Up to zeros these are the products ``sin(theta) cos(theta)`` over the
    principal angles between the two subspaces.
    """
    _check_same_ambient(P, Q)
    PP = P.projector()
    M = (np.eye(P.n) - PP) @ Q.projector() @ PP
    return svd_decreasing(M)


def load_subspace(path, policy: TolerancePolicy = DEFAULT_POLICY) -> Subspace:
    """Read a basis in the matrix text format and orthonormalize it."""
    M = read_matrix(path)
    S = Subspace.from_matrix(M, policy=policy)
    # how far the stored columns were from an orthonormal set
    gram_err = float(np.max(np.abs(M.conj().T @ M - np.eye(M.shape[1]))))
    if gram_err > 1e-8 or S.p != M.shape[1]:
        warnings.warn(
            f"{path}: columns were orthonormalized (Gram error {gram_err:.2e}, "
            f"rank {S.p} of {M.shape[1]})",
            stacklevel=2,
        )
    return S
