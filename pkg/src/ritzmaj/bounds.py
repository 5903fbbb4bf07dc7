"""Majorization bounds for changes in Ritz values.

Every evaluator returns a :class:`BoundReport` comparing a left side (the
decreasing rearrangement of ``|Lambda(X^H A X) - Lambda(Y^H A Y)|`` or a
variant of it) against a right side built from residual singular values,
principal angles and spectral data.

Vector arithmetic is element-wise on decreasing vectors: ``S(.)`` and
``Theta`` are both stored largest first, so e.g. ``S / cos(Theta)`` pairs the
largest singular value with the largest angle. The result is re-sorted only
when stored in the report.

All evaluators accept ``(A, X, Y)``. Passing a prebuilt :class:`RitzPair` as
``A`` (with ``X`` and ``Y`` omitted) reuses its cached quantities, which is
what the fuzz harness does.
"""

from __future__ import annotations

import enum
import itertools
import json
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Any

import numpy as np

from .exceptions import (
    DimensionError,
    GapConditionError,
    NotInvariantError,
    SingularBlockError,
)
from .majorization import MajorizationResult, decreasing, pad_to, weak_majorize
from .numeric import (
    DEFAULT_POLICY,
    TolerancePolicy,
    as_hermitian,
    complement_basis,
    eigh,
    eigvalsh,
    svd_decreasing,
)
from .rayleigh_ritz import RitzData, ritz
from .subspaces import AngleVector, Subspace, join, principal_angles, project_onto

__all__ = [
    "BoundId",
    "BoundReport",
    "RitzPair",
    "CONJECTURAL",
    "INVARIANT_RTOL",
    "EXHAUSTIVE_SEARCH_CAP",
    "lhs_ritz_change",
    "eval_conjecture",
    "eval_thm_mixed",
    "eval_cor_tangent",
    "eval_apriori",
    "eval_sun91",
    "eval_weyl_matching",
    "eval_davis_kahan",
    "eval_quadratic_aposteriori",
    "eval_block_discard",
    "gap_sin",
    "gap_tan",
]


class BoundId(str, enum.Enum):
    conjecture_cos = "conjecture_cos"
    conjecture_tan = "conjecture_tan"
    thm_mixed_cos = "thm_mixed_cos"
    thm_mixed_squared = "thm_mixed_squared"
    thm_mixed_scaled = "thm_mixed_scaled"
    cor_tan_cosmax = "cor_tan_cosmax"
    cor_tan_squared = "cor_tan_squared"
    cor_tan_scaled = "cor_tan_scaled"
    apriori_sin = "apriori_sin"
    apriori_sin_squared = "apriori_sin_squared"
    sun91 = "sun91"
    weyl_matching = "weyl_matching"
    davis_kahan_sin = "davis_kahan_sin"
    davis_kahan_tan = "davis_kahan_tan"
    quad_apost_sin = "quad_apost_sin"
    quad_apost_tan = "quad_apost_tan"
    block_discard = "block_discard"
    additive_dilation = "additive_dilation"
    weyl_additive = "weyl_additive"

    def __str__(self) -> str:
        return self.value


# Bounds whose verdict is not backed by a proof; violations are reported as
# counterexamples rather than bugs.
CONJECTURAL = frozenset({
    BoundId.conjecture_cos,
    BoundId.conjecture_tan,
    BoundId.block_discard,
    BoundId.additive_dilation,
})

# ||R_X|| <= n * ||A|| * INVARIANT_RTOL counts as "exactly invariant"
INVARIANT_RTOL = 1e-10

EXHAUSTIVE_SEARCH_CAP = 12


def _jsonable(v: Any) -> Any:
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v.tolist()]
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, enum.Enum):
        return v.value
    return v


@dataclass(frozen=True)
class BoundReport:
    bound_id: BoundId
    n: int
    p: int
    lhs: np.ndarray
    rhs: np.ndarray
    verdict: MajorizationResult
    context: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.verdict.holds

    @property
    def worst_margin(self) -> float:
        return self.verdict.worst_margin

    @property
    def conjectural(self) -> bool:
        return self.bound_id in CONJECTURAL

    def to_dict(self) -> dict:
        ctx = {"theta": None, "c": None, "delta": None, "lambda_max": None, "lambda_min": None}
        ctx.update(self.context)
        return {
            "bound_id": self.bound_id.value,
            "n": self.n,
            "p": self.p,
            "lhs": _jsonable(self.lhs),
            "rhs": _jsonable(self.rhs),
            "margins": _jsonable(self.verdict.margins),
            "holds": bool(self.verdict.holds),
            "conjectural": self.conjectural,
            "context": _jsonable(ctx),
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _report(bound_id: BoundId, n: int, p: int, lhs, rhs, **context) -> BoundReport:
    lhs = decreasing(lhs)
    rhs = decreasing(rhs)
    return BoundReport(bound_id, n, p, lhs, rhs, weak_majorize(lhs, rhs), context)


class RitzPair:
    """Shared quantities for a Hermitian ``A`` and two trial subspaces.

    Everything is computed lazily and cached, so evaluating many bounds on
    one trial costs a single set of factorizations.
    """

    def __init__(self, A, X: Subspace, Y: Subspace, policy: TolerancePolicy = DEFAULT_POLICY):
        self.A = as_hermitian(A, policy)
        if X.n != Y.n or X.n != self.A.shape[0]:
            raise DimensionError(
                f"dimension mismatch: A is {self.A.shape[0]}, X in C^{X.n}, Y in C^{Y.n}"
            )
        self.X = X
        self.Y = Y
        self.policy = policy

    @classmethod
    def of(cls, A, X=None, Y=None, policy: TolerancePolicy = DEFAULT_POLICY) -> "RitzPair":
        if isinstance(A, RitzPair):
            if X is not None or Y is not None:
                raise TypeError("pass either a RitzPair or (A, X, Y), not both")
            return A
        if X is None or Y is None:
            raise TypeError("X and Y are required")
        return cls(A, X, Y, policy)

    @property
    def n(self) -> int:
        return self.X.n

    @property
    def p(self) -> int:
        return self.X.p

    def require_equal_dims(self) -> None:
        if self.X.p != self.Y.p:
            raise DimensionError(f"bounds need dim X == dim Y, got {self.X.p} and {self.Y.p}")

    @cached_property
    def norm_A(self) -> float:
        return float(svd_decreasing(self.A)[0])

    @cached_property
    def rx(self) -> RitzData:
        return ritz(self.A, self.X, self.policy)

    @cached_property
    def ry(self) -> RitzData:
        return ritz(self.A, self.Y, self.policy)

    @cached_property
    def angles(self) -> AngleVector:
        return principal_angles(self.X, self.Y)

    @cached_property
    def joined(self) -> Subspace:
        return join(self.X, self.Y)

    def _sv(self, S: Subspace, R: np.ndarray) -> np.ndarray:
        return svd_decreasing(project_onto(S, R))

    @cached_property
    def s_py_rx(self) -> np.ndarray:
        return self._sv(self.Y, self.rx.residual)

    @cached_property
    def s_px_ry(self) -> np.ndarray:
        return self._sv(self.X, self.ry.residual)

    @cached_property
    def s_join_rx(self) -> np.ndarray:
        return self._sv(self.joined, self.rx.residual)

    @cached_property
    def s_join_ry(self) -> np.ndarray:
        return self._sv(self.joined, self.ry.residual)

    @cached_property
    def s_ry(self) -> np.ndarray:
        return svd_decreasing(self.ry.residual)

    @cached_property
    def s_rx(self) -> np.ndarray:
        return svd_decreasing(self.rx.residual)

    @cached_property
    def invariant_threshold(self) -> float:
        return self.n * self.norm_A * INVARIANT_RTOL

    @cached_property
    def x_invariant(self) -> bool:
        return float(self.s_rx[0]) <= self.invariant_threshold

    def require_x_invariant(self) -> None:
        if not self.x_invariant:
            raise NotInvariantError(
                f"X is not A-invariant: ||R_X|| = {self.s_rx[0]:.3e} exceeds "
                f"{self.invariant_threshold:.3e}"
            )

    @cached_property
    def lhs(self) -> np.ndarray:
        self.require_equal_dims()
        return decreasing(np.abs(self.rx.ritz_values - self.ry.ritz_values))

    @cached_property
    def extremes(self) -> tuple[float, float]:
        lam = ritz(self.A, self.joined, self.policy).ritz_values
        return float(lam[0]), float(lam[-1])

    @cached_property
    def complement_spectrum(self) -> np.ndarray:
        """Eigenvalues of ``A`` compressed to the complement of ``X`` (decreasing)."""
        Q = complement_basis(self.X.basis)
        if Q.shape[1] == 0:
            return np.zeros(0)
        return eigvalsh(Q.conj().T @ self.A @ Q, self.policy)

    def cos_context(self) -> dict:
        th = self.angles
        return {
            "theta": th.theta,
            "c": math.cos(th.min) / math.cos(th.max),
            "x_invariant": self.x_invariant,
        }


def lhs_ritz_change(A, X: Subspace | None = None, Y: Subspace | None = None) -> np.ndarray:
    """Decreasing rearrangement of ``|alpha_i - beta_i|`` for decreasing Ritz values."""
    return RitzPair.of(A, X, Y).lhs.copy()


def _acute(pair: RitzPair) -> AngleVector:
    pair.require_equal_dims()
    th = pair.angles
    th.require_acute()
    return th


def eval_conjecture(A, X=None, Y=None, variant: str = "cos") -> BoundReport:
    """Conjectured bounds (cos and tan forms); the verdict is not guaranteed."""
    pair = RitzPair.of(A, X, Y)
    th = _acute(pair)
    if variant == "cos":
        rhs = (pair.s_py_rx + pair.s_px_ry) / th.cos()
        bid = BoundId.conjecture_cos
    elif variant == "tan":
        rhs = (pair.s_join_rx + pair.s_join_ry) * th.tan()
        bid = BoundId.conjecture_tan
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return _report(bid, pair.n, pair.p, pair.lhs, rhs, **pair.cos_context())


def eval_thm_mixed(A, X=None, Y=None, variant: str = "cos") -> BoundReport:
    """Proven mixed bounds with ``S(P_Y R_X) + S(P_X R_Y)``.

    ``cos``: divided by ``cos(theta_max)``; ``squared``: squares of both
    sides, divided by ``cos^2(Theta)``; ``scaled``: ``sqrt(c) / cos(Theta)``
    with ``c = cos(theta_min) / cos(theta_max)``.
    """
    pair = RitzPair.of(A, X, Y)
    th = _acute(pair)
    s = pair.s_py_rx + pair.s_px_ry
    ctx = pair.cos_context()
    lhs = pair.lhs
    if variant == "cos":
        rhs = s / math.cos(th.max)
        bid = BoundId.thm_mixed_cos
    elif variant == "squared":
        lhs = lhs**2
        rhs = s**2 / th.cos() ** 2
        bid = BoundId.thm_mixed_squared
    elif variant == "scaled":
        rhs = math.sqrt(ctx["c"]) * s / th.cos()
        bid = BoundId.thm_mixed_scaled
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return _report(bid, pair.n, pair.p, lhs, rhs, **ctx)


def eval_cor_tangent(A, X=None, Y=None, variant: str = "cosmax") -> BoundReport:
    """Proven tangent-type bounds with ``S(P_{X+Y} R_X) + S(P_{X+Y} R_Y)``."""
    pair = RitzPair.of(A, X, Y)
    th = _acute(pair)
    s = pair.s_join_rx + pair.s_join_ry
    ctx = pair.cos_context()
    lhs = pair.lhs
    if variant == "cosmax":
        rhs = s * th.sin() / math.cos(th.max)
        bid = BoundId.cor_tan_cosmax
    elif variant == "squared":
        lhs = lhs**2
        rhs = s**2 * th.tan() ** 2
        bid = BoundId.cor_tan_squared
    elif variant == "scaled":
        rhs = math.sqrt(ctx["c"]) * s * th.tan()
        bid = BoundId.cor_tan_scaled
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return _report(bid, pair.n, pair.p, lhs, rhs, **ctx)


def eval_apriori(A, X=None, Y=None, invariant_x: bool = False) -> BoundReport:
    """A priori bound ``(lambda_max - lambda_min) sin(Theta)``, or ``sin^2`` when X is invariant."""
    pair = RitzPair.of(A, X, Y)
    pair.require_equal_dims()
    th = pair.angles
    lmax, lmin = pair.extremes
    if invariant_x:
        pair.require_x_invariant()
        rhs = (lmax - lmin) * th.sin() ** 2
        bid = BoundId.apriori_sin_squared
    else:
        rhs = (lmax - lmin) * th.sin()
        bid = BoundId.apriori_sin
    return _report(bid, pair.n, pair.p, pair.lhs, rhs,
                   theta=th.theta, lambda_max=lmax, lambda_min=lmin)


def eval_sun91(A, X=None, Y=None) -> BoundReport:
    """``S(R_Y) tan(theta_max)`` for an A-invariant ``X``.

    The context also carries the tangent-corollary right side
    ``S(P_{X+Y} R_Y) sin(Theta) / cos(theta_max)`` that dominates it.
    """
    pair = RitzPair.of(A, X, Y)
    th = _acute(pair)
    pair.require_x_invariant()
    rhs = pair.s_ry * math.tan(th.max)
    sharper = decreasing(pair.s_join_ry * th.sin() / math.cos(th.max))
    return _report(BoundId.sun91, pair.n, pair.p, pair.lhs, rhs,
                   theta=th.theta, cor_tan_rhs=sharper,
                   cor_tan_dominated=bool(np.all(sharper <= decreasing(rhs) + 1e-12)))


@lru_cache(maxsize=None)
def _subsets(n: int, p: int) -> np.ndarray:
    return np.array(list(itertools.combinations(range(n), p)), dtype=np.intp).reshape(-1, p)


def interleaved_residual_bound(s: np.ndarray) -> np.ndarray:
    """``[s1, s1, s2, s2, ...]`` truncated to ``len(s)``."""
    s = np.asarray(s, dtype=float)
    return np.repeat(s, 2)[: s.size]


def eval_weyl_matching(A, Y: Subspace, cap: int = EXHAUSTIVE_SEARCH_CAP) -> BoundReport:
    """Search for ``p`` eigenvalues of ``A`` matched to the Ritz values on ``Y``.

    The relation checked is ``|Lambda_I(A) - Lambda(Y^H A Y)| <_w
    [s1, s1, s2, s2, ...]``, which in turn is ``<_w 2 S(R_Y)``. For ``n <=
    cap`` all index sets are enumerated and the one with the largest worst
    prefix margin is returned (certified). Otherwise a greedy nearest
    matching is used and the context is flagged ``heuristic``.
    """
    A = as_hermitian(A)
    if A.shape[0] != Y.n:
        raise DimensionError("A and Y have different dimensions")
    n, p = Y.n, Y.p
    lam = eigvalsh(A)
    ry = ritz(A, Y)
    mu = ry.ritz_values
    s = svd_decreasing(ry.residual)
    middle = interleaved_residual_bound(s)
    two_s = 2.0 * s
    if n <= cap:
        idx = _subsets(n, p)
        d = -np.sort(-np.abs(lam[idx] - mu[None, :]), axis=1)
        margins = np.cumsum(middle)[None, :] - np.cumsum(d, axis=1)
        best = int(np.argmax(margins.min(axis=1)))
        chosen = idx[best]
        method = "exhaustive"
    else:
        taken: set[int] = set()
        for m in mu:
            order = np.argsort(np.abs(lam - m), kind="stable")
            taken.add(int(next(i for i in order if int(i) not in taken)))
        chosen = np.array(sorted(taken), dtype=np.intp)
        method = "heuristic"
    lhs = np.abs(lam[chosen] - mu)
    rep = _report(BoundId.weyl_matching, n, p, lhs, middle,
                  indices=chosen, method=method, heuristic=method == "heuristic",
                  residual_singvals=s)
    outer = weak_majorize(lhs, two_s)
    rep.context["two_s_holds"] = outer.holds
    rep.context["two_s_rhs"] = two_s
    rep.context["middle_within_two_s"] = weak_majorize(middle, two_s).holds
    return rep


# -- gap computations -------------------------------------------------------


def _interval_distance(points: np.ndarray, a: float, b: float) -> np.ndarray:
    return np.maximum(np.maximum(a - points, points - b), 0.0)


def gap_sin(ritz_values: np.ndarray, complement: np.ndarray) -> float:
    """Gap for the sin-Theta theorem.

    Ritz values fill ``[a, b]``; the complementary spectrum must stay outside
    ``[a - delta, b + delta]``. Returns the largest such ``delta``.
    """
    if complement.size == 0:
        return math.inf
    a, b = float(np.min(ritz_values)), float(np.max(ritz_values))
    delta = float(np.min(_interval_distance(complement, a, b)))
    if delta <= 0:
        raise GapConditionError(
            "gap condition not met (sin): complementary spectrum meets the Ritz interval "
            f"[{a:.6g}, {b:.6g}]"
        )
    return delta


def gap_tan(ritz_values: np.ndarray, complement: np.ndarray) -> tuple[float, int]:
    """Gap for the relaxed tan-Theta theorem; returns ``(delta, condition)``.

    Condition 1: the complementary spectrum lies entirely on one side of the
    Ritz interval. Condition 2: the Ritz values lie outside the interval
    spanned by the complementary spectrum. The larger admissible gap wins.
    """
    if complement.size == 0:
        return math.inf, 1
    a, b = float(np.min(ritz_values)), float(np.max(ritz_values))
    cands = []
    if np.all(complement <= a):
        cands.append((a - float(np.max(complement)), 1))
    elif np.all(complement >= b):
        cands.append((float(np.min(complement)) - b, 1))
    lo, hi = float(np.min(complement)), float(np.max(complement))
    d2 = _interval_distance(ritz_values, lo, hi)
    cands.append((float(np.min(d2)), 2))
    cands = [c for c in cands if c[0] > 0]
    if not cands:
        raise GapConditionError(
            "gap condition not met (tan): condition 1 fails (complementary spectrum on both "
            "sides of the Ritz interval or touching it) and condition 2 fails (a Ritz value "
            "lies inside the complementary interval)"
        )
    # ties go to condition 1
    return max(cands, key=lambda c: c[0])


def eval_davis_kahan(A, X=None, Y=None, variant: str = "sin", delta: float | None = None,
                     improved: bool = False) -> BoundReport:
    """Residual bounds on the angles: ``sin(Theta) <_w S(R_Y)/delta`` or the tan form.

    ``X`` must be A-invariant. ``delta`` is computed from the spectra unless
    overridden. With ``improved=True`` the tan variant also records (never
    asserts) the relation with ``S(P_{X+Y} R_Y)`` in place of ``S(R_Y)``.
    """
    pair = RitzPair.of(A, X, Y)
    pair.require_equal_dims()
    pair.require_x_invariant()
    th = pair.angles
    ctx: dict = {"theta": th.theta}
    if variant == "sin":
        d = gap_sin(pair.ry.ritz_values, pair.complement_spectrum) if delta is None else delta
        lhs = th.sin()
        bid = BoundId.davis_kahan_sin
    elif variant == "tan":
        if delta is None:
            d, cond = gap_tan(pair.ry.ritz_values, pair.complement_spectrum)
            ctx["condition"] = cond
        else:
            d = delta
        lhs = th.tan()
        bid = BoundId.davis_kahan_tan
    else:
        raise ValueError(f"unknown variant {variant!r}")
    ctx["delta"] = d
    rhs = pair.s_ry / d
    rep = _report(bid, pair.n, pair.p, lhs, rhs, **ctx)
    if improved and variant == "tan":
        rep.context["improved_holds"] = weak_majorize(lhs, pair.s_join_ry / d).holds
    return rep


def eval_quadratic_aposteriori(A, X=None, Y=None, variant: str = "sin",
                               delta: float | None = None) -> BoundReport:
    """Second-order a posteriori bounds for an A-invariant ``X``.

    ``sin``: ``lhs <_w S(P_{X+Y} R_Y) S(R_Y) / (cos(theta_max) delta)``.
    ``tan``: ``lhs^2 <_w S^2(P_{X+Y} R_Y) S^2(R_Y) / delta^2``.
    The report's ``rhs`` is the tighter middle expression; the context holds
    the looser ``S^2(R_Y)`` / ``S^4(R_Y)`` form and its verdict.
    """
    pair = RitzPair.of(A, X, Y)
    pair.require_equal_dims()
    pair.require_x_invariant()
    th = _acute(pair)
    lhs = pair.lhs
    if variant == "sin":
        d = gap_sin(pair.ry.ritz_values, pair.complement_spectrum) if delta is None else delta
        denom = math.cos(th.max) * d
        rhs = pair.s_join_ry * pair.s_ry / denom
        loose = pair.s_ry**2 / denom
        bid = BoundId.quad_apost_sin
    elif variant == "tan":
        d = gap_tan(pair.ry.ritz_values, pair.complement_spectrum)[0] if delta is None else delta
        lhs = lhs**2
        rhs = pair.s_join_ry**2 * pair.s_ry**2 / d**2
        loose = pair.s_ry**4 / d**2
        bid = BoundId.quad_apost_tan
    else:
        raise ValueError(f"unknown variant {variant!r}")
    rep = _report(bid, pair.n, pair.p, lhs, rhs, theta=th.theta, delta=d)
    rep.context["loose_rhs"] = decreasing(loose)
    rep.context["loose_holds"] = weak_majorize(lhs, loose).holds
    rep.context["middle_le_loose"] = bool(np.all(decreasing(rhs) <= decreasing(loose) + 1e-12))
    return rep


def eval_block_discard(A, k: int, eig_indices) -> BoundReport:
    """Eigenvalue change after discarding the off-diagonal blocks of ``A``.

    ``X`` is spanned by the eigenvectors of ``A`` with the given 0-based
    indices into the decreasing spectrum, ``Y`` by the first ``k`` coordinate
    vectors. Left side ``|Lambda(X^H A X) - Lambda(A11)|``, right side
    ``S(A12) S(X2 X1^{-1})``. The verdict is conjectural; the context also
    carries the proven scaled tangent bound for the same pair.
    """
    A = as_hermitian(A)
    n = A.shape[0]
    idx = np.asarray(list(eig_indices), dtype=np.intp)
    if not 1 <= k <= n or idx.size != k:
        raise DimensionError(f"need k in [1, {n}] and exactly k eigenvalue indices")
    if np.any(idx < 0) or np.any(idx >= n) or np.unique(idx).size != k:
        raise DimensionError("eigenvalue indices must be distinct and in range")
    w, V = eigh(A)
    Xb = V[:, idx]
    X1, X2 = Xb[:k], Xb[k:]
    s1 = svd_decreasing(X1)
    if s1[-1] <= DEFAULT_POLICY.rank_cutoff(X1, max(s1[0], 1.0)):
        raise SingularBlockError(
            "X1 is singular to rank tolerance; the general case needs the tangent "
            "definition for non-invertible X1, which is not implemented"
        )
    T = np.linalg.solve(X1.T, X2.T).T  # X2 X1^{-1}
    tan_block = pad_to(svd_decreasing(T), k)
    s_a12 = pad_to(svd_decreasing(A[:k, k:]), k)
    lhs = np.abs(np.sort(w[idx])[::-1] - eigvalsh(A[:k, :k]))
    rhs = s_a12 * tan_block
    ctx: dict = {"indices": idx, "s_a12": s_a12, "tan_theta": tan_block}
    X = Subspace(Xb)
    Y = Subspace(np.eye(n, k, dtype=np.complex128))
    pair = RitzPair(A, X, Y)
    th = pair.angles
    ctx["theta"] = th.theta
    ctx["tan_matches_angles"] = bool(np.allclose(np.tan(th.theta), tan_block, rtol=1e-8, atol=1e-10))
    proven = eval_cor_tangent(pair, variant="scaled")
    ctx["c"] = proven.context["c"]
    ctx["scaled_rhs"] = proven.rhs
    ctx["scaled_holds"] = proven.holds
    return _report(BoundId.block_discard, n, k, lhs, rhs, **ctx)
