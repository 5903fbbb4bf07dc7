"""Matrix Rayleigh quotients, Ritz values and residuals."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionError
from .majorization import MajorizationResult, weak_majorize
from .numeric import DEFAULT_POLICY, TolerancePolicy, as_hermitian, eigvalsh, hermitian_part, svd_decreasing
from .subspaces import Subspace, join, principal_angles, project_onto

__all__ = [
    "RitzData",
    "ritz",
    "projected_residual_singvals",
    "ritz_extremes_on_join",
    "residual_lemma",
]


@dataclass(frozen=True)
class RitzData:
    """Rayleigh-Ritz data of ``A`` on a trial subspace.

    ``rq`` is ``X^H A X``, ``ritz_values`` its eigenvalues (decreasing) and
    ``residual`` is ``A X - X rq``.
    """

    rq: np.ndarray
    ritz_values: np.ndarray
    residual: np.ndarray

    def residual_norm(self) -> float:
        return float(svd_decreasing(self.residual)[0]) if self.residual.size else 0.0


def _check(A: np.ndarray, X: Subspace) -> None:
    if A.shape[0] != X.n:
        raise DimensionError(f"A is {A.shape[0]}x{A.shape[0]} but the subspace lives in C^{X.n}")


def ritz(A, X: Subspace, policy: TolerancePolicy = DEFAULT_POLICY) -> RitzData:
    A = as_hermitian(A, policy)
    _check(A, X)
    B = X.basis
    AB = A @ B
    rq = hermitian_part(B.conj().T @ AB)
    return RitzData(rq=rq, ritz_values=eigvalsh(rq, policy), residual=AB - B @ rq)


def projected_residual_singvals(A, X: Subspace, onto: Subspace,
                                policy: TolerancePolicy = DEFAULT_POLICY) -> np.ndarray:
    """Decreasing singular values of ``P_onto R_X``."""
    if onto.n != X.n:
        raise DimensionError("projection subspace has the wrong ambient dimension")
    return svd_decreasing(project_onto(onto, ritz(A, X, policy).residual))


def ritz_extremes_on_join(A, X: Subspace, Y: Subspace,
                          policy: TolerancePolicy = DEFAULT_POLICY) -> tuple[float, float]:
    """Largest and smallest Ritz values of ``A`` on ``X + Y``."""
    lam = ritz(A, join(X, Y), policy).ritz_values
    return float(lam[0]), float(lam[-1])


def residual_lemma(A, X: Subspace, Y: Subspace,
                   policy: TolerancePolicy = DEFAULT_POLICY) -> tuple[MajorizationResult, MajorizationResult]:
    """Check both relations ``S(P_X R_Y) <_w S(P_{X+Y} R_Y) sin(Theta)`` and
    the same with the roles of ``X`` and ``Y`` exchanged.

    Requires ``dim X == dim Y``.
    """
    if X.p != Y.p:
        raise DimensionError("the residual lemma needs subspaces of equal dimension")
    J = join(X, Y)
    sin = principal_angles(X, Y).sin()
    RX = ritz(A, X, policy).residual
    RY = ritz(A, Y, policy).residual
    out = []
    for R, other in ((RY, X), (RX, Y)):
        lhs = svd_decreasing(project_onto(other, R))
        rhs = svd_decreasing(project_onto(J, R)) * sin
        out.append(weak_majorize(lhs, rhs))
    return out[0], out[1]
