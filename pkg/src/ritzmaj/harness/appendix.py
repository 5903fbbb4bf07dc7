"""Randomized property checks for the supporting singular-value and eigenvalue
majorization results (Fan, products, Weyl, commutators, projector products).

Each property draws its own instances from ``SeedSequence([seed, k, i])``
where ``k`` is the property's position in :data:`PROPERTIES`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg

from ..majorization import check_tol, decreasing, pad_to, weak_majorize
from ..numeric import eigvalsh, psd_sqrt, svd_decreasing
from ..subspaces import principal_angles, projector_product_singvals
from .generators import gaussian, gen_hermitian, gen_subspace, gen_unitary

__all__ = [
    "PropertyResult",
    "PROPERTIES",
    "run_appendix_suite",
    "remark_prefix_forms",
    "format_table",
]

N_MIN, N_MAX = 2, 8
# invertible T is redrawn until its condition number is below this
COND_MAX = 1e6
IDENTITY_RTOL = 1e-10


@dataclass
class PropertyResult:
    name: str
    instances: int = 0
    failures: int = 0
    worst_margin: float = math.inf

    @property
    def passed(self) -> bool:
        return self.instances > 0 and self.failures == 0

    def add(self, margin: float, ok: bool) -> None:
        self.instances += 1
        self.failures += int(not ok)
        self.worst_margin = min(self.worst_margin, margin)


def _rng(seed: int, k: int, i: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), k, i])))


def _kind(i: int) -> str:
    return "real" if i % 2 == 0 else "complex"


def _square(rng, n, kind):
    return gaussian(rng, (n, n), kind)


def _pd(rng, n, kind):
    M = _square(rng, n, kind)
    return M.conj().T @ M + 0.1 * np.eye(n)


def _invertible(rng, n, kind):
    while True:
        T = _square(rng, n, kind)
        if np.linalg.cond(T) < COND_MAX:
            return T


def _lam_diff(A, B):
    return np.abs(eigvalsh(A) - eigvalsh(B))


def _abs_pol_sqrt(M):
    """``|M|^{1/2}``, with ``|M|`` the Hermitian polar factor of ``M``."""
    return psd_sqrt(scipy.linalg.polar(M)[1])


def _re(M):
    return 0.5 * (M + M.conj().T)


def _maj(x, y, extra_tol: float = 0.0):
    r = weak_majorize(x, y, check_tol(x, y) + extra_tol)
    return [(r.worst_margin, r.holds)]


def _leq(x, y):
    x, y = decreasing(x), decreasing(y)
    m = max(x.size, y.size)
    x, y = pad_to(x, m), pad_to(y, m)
    tol = check_tol(x, y)
    d = float(np.min(y - x))
    return (d, d >= -tol)


def _equal(x, y):
    x, y = decreasing(x), decreasing(y)
    m = max(x.size, y.size)
    x, y = pad_to(x, m), pad_to(y, m)
    err = float(np.max(np.abs(x - y), initial=0.0))
    tol = IDENTITY_RTOL * max(1.0, float(np.max(np.abs(np.concatenate([x, y])), initial=0.0)))
    return (-err, err <= tol)


# each check returns a list of (margin, ok); ok iff margin >= -tolerance

def p_fan(rng, n, kind):
    A, B = _square(rng, n, kind), _square(rng, n, kind)
    return _maj(svd_decreasing(A + B), svd_decreasing(A) + svd_decreasing(B))


def p_product(rng, n, kind):
    m, k = int(rng.integers(N_MIN, N_MAX + 1)), int(rng.integers(N_MIN, N_MAX + 1))
    A, B = gaussian(rng, (n, k), kind), gaussian(rng, (k, m), kind)
    sab, sa, sb = svd_decreasing(A @ B), svd_decreasing(A), svd_decreasing(B)
    L = max(sab.size, sa.size, sb.size)
    sab, sa, sb = pad_to(sab, L), pad_to(sa, L), pad_to(sb, L)
    return _maj(sab, sa * sb) + [_leq(sab, sa[0] * sb), _leq(sab, sa * sb[0])]


def p_weyl(rng, n, kind):
    A, B = gen_hermitian(rng, n, kind), gen_hermitian(rng, n, kind)
    return _maj(_lam_diff(A, B), svd_decreasing(A - B))


def p_condition(rng, n, kind):
    # real diagonal spectra; the eigenvalues are known exactly from D1, D2
    J, T = _invertible(rng, n, kind), _invertible(rng, n, kind)
    d1, d2 = rng.standard_normal(n), rng.standard_normal(n)
    A = J @ np.diag(d1) @ np.linalg.inv(J)
    B = T @ np.diag(d2) @ np.linalg.inv(T)
    lhs = np.abs(decreasing(d1) - decreasing(d2))
    kappa = np.linalg.cond(J) * np.linalg.cond(T)
    return _maj(lhs, math.sqrt(kappa) * svd_decreasing(A - B))


def p_normal_product(rng, n, kind):
    # commuting PSD pair from a shared eigenbasis
    U = gen_unitary(rng, n, kind)
    A = (U * rng.uniform(0, 2, n)) @ U.conj().T
    B = (U * rng.uniform(0, 2, n)) @ U.conj().T
    out = _maj(svd_decreasing(_abs_pol_sqrt(A @ B)), svd_decreasing(_abs_pol_sqrt(B @ A)))
    # non-commuting pair with normal AB: B = A^{-1} N
    V = gen_unitary(rng, n, "complex")
    N = (V * (rng.standard_normal(n) + 1j * rng.standard_normal(n))) @ V.conj().T
    A = _invertible(rng, n, kind)
    B = np.linalg.solve(A, N)
    out += _maj(svd_decreasing(_abs_pol_sqrt(A @ B)), svd_decreasing(_abs_pol_sqrt(B @ A)))
    return out


def p_power(rng, n, kind):
    A, B = _square(rng, n, kind), _square(rng, n, kind)
    sab, sa, sb = svd_decreasing(A @ B), svd_decreasing(A), svd_decreasing(B)
    return [r for t in (0.5, 2.0) for r in _maj(sab ** t, sa ** t * sb ** t)]


def p_sqrt_lemma(rng, n, kind):
    A, B = _square(rng, n, kind), _square(rng, n, kind)
    T = A @ B
    s = svd_decreasing(_abs_pol_sqrt(T))
    st = svd_decreasing(T)
    # the square root is only Holder-1/2 continuous: a tiny singular value
    # perturbed by u*||T|| moves its root by up to sqrt(u*||T||). The identity
    # is therefore compared after squaring, and the majorization gets that slack.
    slack = n * math.sqrt(np.finfo(float).eps * st[0])
    return [_equal(s ** 2, st)] + _maj(
        s, np.sqrt(svd_decreasing(A)) * np.sqrt(svd_decreasing(B)), slack
    )


def p_real_part_theorem(rng, n, kind):
    # A = H B^{-1} makes AB = H Hermitian
    H = gen_hermitian(rng, n, kind)
    B = _invertible(rng, n, kind)
    A = H @ np.linalg.inv(B)
    return _maj(svd_decreasing(A @ B), svd_decreasing(_re(B @ A)))


def p_real_part_lemma(rng, n, kind):
    A = _square(rng, n, kind)
    return _maj(svd_decreasing(_re(A)), svd_decreasing(A))


def p_pd_commutator(rng, n, kind):
    A, B, T = gen_hermitian(rng, n, kind), gen_hermitian(rng, n, kind), _pd(rng, n, kind)
    smin = svd_decreasing(T)[-1]
    return _maj(smin * svd_decreasing(A - B), svd_decreasing(A @ T - T @ B))


def _commutators(A, B, T):
    Ti = np.linalg.inv(T)
    return svd_decreasing(A @ T - T @ B), svd_decreasing(Ti @ A - B @ Ti), svd_decreasing(Ti)


def p_two_sided_commutator(rng, n, kind):
    A, B, T = gen_hermitian(rng, n, kind), gen_hermitian(rng, n, kind), _pd(rng, n, kind)
    s1, s2, _ = _commutators(A, B, T)
    return _maj(svd_decreasing(A - B) ** 2, s1 * s2)


def p_commutator_inverse(rng, n, kind):
    A, B, T = gen_hermitian(rng, n, kind), gen_hermitian(rng, n, kind), _pd(rng, n, kind)
    s1, _, si = _commutators(A, B, T)
    return _maj(svd_decreasing(A - B) ** 2, si ** 2 * s1 ** 2)


def p_invertible_commutator(rng, n, kind):
    A, B, T = gen_hermitian(rng, n, kind), gen_hermitian(rng, n, kind), _invertible(rng, n, kind)
    s1, s2, si = _commutators(A, B, T)
    d = _lam_diff(A, B)
    smin = svd_decreasing(T)[-1]
    return _maj(smin * d, s1) + _maj(d ** 2, s1 * s2) + _maj(d ** 2, si ** 2 * s1 ** 2)


def p_projector_product(rng, n, kind):
    k, l = int(rng.integers(1, n + 1)), int(rng.integers(1, n + 1))
    P, Q = gen_subspace(rng, n, k, kind), gen_subspace(rng, n, l, kind)
    th = principal_angles(P, Q)
    sc = np.sin(th.theta) * np.cos(th.theta)
    s = projector_product_singvals(P, Q)
    return [_equal(s, sc)]


PROPERTIES: dict[str, Callable] = {
    "fan": p_fan,
    "product": p_product,
    "weyl": p_weyl,
    "condition_number": p_condition,
    "normal_product": p_normal_product,
    "power": p_power,
    "sqrt_lemma": p_sqrt_lemma,
    "real_part_theorem": p_real_part_theorem,
    "real_part_lemma": p_real_part_lemma,
    "pd_commutator": p_pd_commutator,
    "two_sided_commutator": p_two_sided_commutator,
    "commutator_inverse": p_commutator_inverse,
    "invertible_commutator": p_invertible_commutator,
    "projector_product": p_projector_product,
}

REMARK_KEY = len(PROPERTIES)


@dataclass
class RemarkResult:
    instances: int = 0
    elementwise_failures: int = 0
    norm_form_failures: int = 0
    # instances where the elementwise form is strictly tighter at some prefix
    elementwise_tighter: int = 0

    @property
    def passed(self) -> bool:
        return self.instances > 0 and self.elementwise_failures == 0 and self.norm_form_failures == 0


def remark_prefix_forms(seed: int, instances: int = 100) -> RemarkResult:
    """Compare the two prefix forms of the two-sided commutator inequality.

    The elementwise form bounds ``sum_k s_i(A-B)^2`` by ``sum_k s_i(X) s_i(Y)``;
    the norm form bounds ``(sum_k s_i(A-B))^2`` by ``(sum_k s_i(X)) (sum_k s_i(Y))``,
    with ``X = AT - TB`` and ``Y = T^{-1}A - BT^{-1}``.
    """
    out = RemarkResult()
    for i in range(instances):
        rng = _rng(seed, REMARK_KEY, i)
        n = int(rng.integers(N_MIN, N_MAX + 1))
        kind = _kind(i)
        A, B, T = gen_hermitian(rng, n, kind), gen_hermitian(rng, n, kind), _pd(rng, n, kind)
        s1, s2, _ = _commutators(A, B, T)
        d = svd_decreasing(A - B)
        elem = np.cumsum(s1 * s2) - np.cumsum(d ** 2)
        norm = np.cumsum(s1) * np.cumsum(s2) - np.cumsum(d) ** 2
        tol = check_tol(d ** 2, s1 * s2) * max(1.0, float(np.max(norm + np.cumsum(d) ** 2)))
        out.instances += 1
        out.elementwise_failures += int(np.min(elem) < -tol)
        out.norm_form_failures += int(np.min(norm) < -tol)
        # relative slack: elementwise rhs over lhs versus norm-form rhs over lhs
        lhs_e, lhs_n = np.cumsum(d ** 2), np.cumsum(d) ** 2
        ratio_e = np.cumsum(s1 * s2) / lhs_e
        ratio_n = np.cumsum(s1) * np.cumsum(s2) / lhs_n
        out.elementwise_tighter += int(np.any(ratio_e < ratio_n * (1 - 1e-12)))
    return out


def run_appendix_suite(trials: int = 1000, seed: int = 0,
                       names=None) -> tuple[list[PropertyResult], RemarkResult]:
    """Run every property on ``trials`` instances plus the prefix-form comparison."""
    if trials < 1:
        raise ValueError("trials >= 1 required")
    results = []
    for k, (name, fn) in enumerate(PROPERTIES.items()):
        if names is not None and name not in names:
            continue
        res = PropertyResult(name)
        for i in range(trials):
            rng = _rng(seed, k, i)
            n = int(rng.integers(N_MIN, N_MAX + 1))
            margins = fn(rng, n, _kind(i))
            worst = min(m for m, _ in margins)
            res.add(worst, all(ok for _, ok in margins))
        results.append(res)
    return results, remark_prefix_forms(seed, min(trials, 100))


def format_table(results, remark: RemarkResult | None = None) -> str:
    lines = [f"{'property':<24}{'instances':>10}{'failures':>10}{'worst margin':>15}  status"]
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{r.name:<24}{r.instances:>10}{r.failures:>10}{r.worst_margin:>15.3e}  {status}")
    if remark is not None:
        status = "PASS" if remark.passed else "FAIL"
        lines.append(
            f"{'remark_prefix_forms':<24}{remark.instances:>10}"
            f"{remark.elementwise_failures + remark.norm_form_failures:>10}"
            f"{'':>15}  {status} (elementwise tighter on {remark.elementwise_tighter})"
        )
    return "\n".join(lines)
