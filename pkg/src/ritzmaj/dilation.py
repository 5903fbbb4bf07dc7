"""Dilation of Hermitian matrices with spectrum in [0, 1] to projectors.

A Hermitian ``F`` with ``0 <= F <= I`` is the compression to the first ``n``
coordinates of the ``2n x 2n`` orthogonal projector

    P(F) = [[F, sqrt(F(I-F))], [sqrt((I-F)F), I-F]] = B B^H,
    B = [sqrt(F); sqrt(I-F)].

So ``Lambda(F)`` are the Ritz values of ``A = P_Z`` (projector onto those
coordinates) on ``range(P(F))``, and eigenvalue perturbation ``F -> G``
becomes a change of trial subspace. The matrix functions are all evaluated
through one eigendecomposition of ``F`` so the blocks are mutually
consistent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bounds import BoundId, BoundReport, _report
from .exceptions import DimensionError, NotAcuteError, SpectrumError
from .majorization import decreasing
from .numeric import DEFAULT_POLICY, TolerancePolicy, as_hermitian, eigh, eigvalsh, hermitian_part, svd_decreasing
from .subspaces import AngleVector, Subspace, principal_angles

__all__ = [
    "NormalizedPair",
    "normalize_pair",
    "dilation_factor",
    "dilation_projector",
    "dilation_subspace",
    "dilation_residual_singvals",
    "dilation_cosines",
    "dilation_angles",
    "coordinate_projector",
    "eval_additive_bound",
    "eval_weyl_additive",
]


@dataclass(frozen=True)
class NormalizedPair:
    """``F``, ``G`` mapped by the common affine map ``t -> (t - shift) / scale``."""

    F: np.ndarray
    G: np.ndarray
    shift: float
    scale: float


def normalize_pair(F, G, policy: TolerancePolicy = DEFAULT_POLICY) -> NormalizedPair:
    F = as_hermitian(F, policy)
    G = as_hermitian(G, policy)
    if F.shape != G.shape:
        raise DimensionError(f"F is {F.shape} but G is {G.shape}")
    lf, lg = eigvalsh(F, policy), eigvalsh(G, policy)
    lo = min(lf[-1], lg[-1])
    hi = max(lf[0], lg[0])
    scale = hi - lo
    if scale <= policy.atol * max(1.0, abs(hi), abs(lo)):
        scale = 1.0
    eye = np.eye(F.shape[0])
    return NormalizedPair(
        F=hermitian_part((F - lo * eye) / scale),
        G=hermitian_part((G - lo * eye) / scale),
        shift=float(lo),
        scale=float(scale),
    )


def _unit_spectrum(F, policy: TolerancePolicy) -> tuple[np.ndarray, np.ndarray]:
    w, V = eigh(F, policy)
    window = policy.atol * max(1.0, F.shape[0])
    if w.size and (w[-1] < -window or w[0] > 1 + window):
        raise SpectrumError(
            f"spectrum [{w[-1]:.6g}, {w[0]:.6g}] is outside [0, 1]"
        )
    return np.clip(w, 0.0, 1.0), V


def _fun(V: np.ndarray, vals: np.ndarray) -> np.ndarray:
    return hermitian_part((V * vals) @ V.conj().T)


def dilation_factor(F, policy: TolerancePolicy = DEFAULT_POLICY) -> np.ndarray:
    """The ``2n x n`` orthonormal factor ``[sqrt(F); sqrt(I - F)]``."""
    w, V = _unit_spectrum(F, policy)
    return np.vstack([_fun(V, np.sqrt(w)), _fun(V, np.sqrt(1.0 - w))])


def dilation_projector(F, policy: TolerancePolicy = DEFAULT_POLICY) -> np.ndarray:
    """The block projector ``P(F)``."""
    w, V = _unit_spectrum(F, policy)
    Fc = _fun(V, w)
    off = _fun(V, np.sqrt(w * (1.0 - w)))
    I_F = _fun(V, 1.0 - w)
    return np.block([[Fc, off], [off.conj().T, I_F]])


def dilation_subspace(F, policy: TolerancePolicy = DEFAULT_POLICY) -> Subspace:
    return Subspace(dilation_factor(F, policy), policy)


def coordinate_projector(n: int) -> np.ndarray:
    """``P_Z``: projector onto the first ``n`` of ``2n`` coordinates."""
    P = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    P[:n, :n] = np.eye(n)
    return P


def dilation_residual_singvals(F, policy: TolerancePolicy = DEFAULT_POLICY) -> np.ndarray:
    """Closed form ``(sqrt(1 - Lambda(F)) sqrt(Lambda(F)))`` sorted decreasing."""
    w, _ = _unit_spectrum(F, policy)
    return decreasing(np.sqrt(1.0 - w) * np.sqrt(w))


def dilation_cosines(F, G, policy: TolerancePolicy = DEFAULT_POLICY) -> np.ndarray:
    """``S(sqrt(F) sqrt(G) + sqrt(I-F) sqrt(I-G))``, i.e. the cosines (decreasing)."""
    BF, BG = dilation_factor(F, policy), dilation_factor(G, policy)
    n = BF.shape[1]
    M = BF[:n].conj().T @ BG[:n] + BF[n:].conj().T @ BG[n:]
    return np.clip(svd_decreasing(M), 0.0, 1.0)


def dilation_angles(F, G, policy: TolerancePolicy = DEFAULT_POLICY) -> AngleVector:
    """Principal angles between ``range(P(F))`` and ``range(P(G))``.

    Cosines are those of :func:`dilation_cosines`; small angles are refined
    from sines as in :func:`~ritzmaj.subspaces.principal_angles`.
    """
    F = as_hermitian(F, policy)
    G = as_hermitian(G, policy)
    if F.shape != G.shape:
        raise DimensionError("F and G must have the same size")
    return principal_angles(dilation_subspace(F, policy), dilation_subspace(G, policy))


def eval_additive_bound(F, G, policy: TolerancePolicy = DEFAULT_POLICY) -> BoundReport:
    """``|Lambda(F) - Lambda(G)| <_w {S(R_F) + S(R_G)} tan(Theta)`` on dilation subspaces.

    Inputs are normalized by a common affine map; both sides are reported
    back on the original scale. Conjecture-grade.
    """
    pair = normalize_pair(F, G, policy)
    th = dilation_angles(pair.F, pair.G, policy)
    if not th.is_acute():
        raise NotAcuteError("tangent infinite: a dilation cosine vanishes")
    res = dilation_residual_singvals(pair.F, policy) + dilation_residual_singvals(pair.G, policy)
    lf, lg = eigvalsh(pair.F, policy), eigvalsh(pair.G, policy)
    lhs = np.abs(lf - lg) * pair.scale
    rhs = res * np.tan(th.theta) * pair.scale
    n = pair.F.shape[0]
    return _report(BoundId.additive_dilation, n, n, lhs, rhs, theta=th.theta,
                   shift=pair.shift, scale=pair.scale)


def eval_weyl_additive(F, G, policy: TolerancePolicy = DEFAULT_POLICY) -> BoundReport:
    """Weyl's majorization ``|Lambda(F) - Lambda(G)| <_w S(F - G)``."""
    F = as_hermitian(F, policy)
    G = as_hermitian(G, policy)
    if F.shape != G.shape:
        raise DimensionError(f"F is {F.shape} but G is {G.shape}")
    lhs = np.abs(eigvalsh(F, policy) - eigvalsh(G, policy))
    rhs = svd_decreasing(F - G)
    n = F.shape[0]
    return _report(BoundId.weyl_additive, n, n, lhs, rhs)
