"""Rayleigh-Ritz eigenvalue perturbation bounds in majorization form.

Ritz values, residuals and principal angles, together with mixed
(angle plus residual) bounds on how Ritz values move when the trial
subspace changes, and a harness that checks them on random problems.
"""

from .bounds import (
    BoundId,
    BoundReport,
    RitzPair,
    eval_apriori,
    eval_block_discard,
    eval_conjecture,
    eval_cor_tangent,
    eval_davis_kahan,
    eval_quadratic_aposteriori,
    eval_sun91,
    eval_thm_mixed,
    eval_weyl_matching,
    lhs_ritz_change,
)
from .dilation import eval_additive_bound, eval_weyl_additive
from .exceptions import RitzMajError
from .majorization import MajorizationResult, strong_majorize, weak_majorize
from .numeric import DEFAULT_POLICY, TolerancePolicy
from .rayleigh_ritz import RitzData, ritz
from .subspaces import AngleVector, Subspace, principal_angles

__version__ = "0.1.0"

__all__ = [
    "AngleVector",
    "BoundId",
    "BoundReport",
    "DEFAULT_POLICY",
    "MajorizationResult",
    "RitzData",
    "RitzMajError",
    "RitzPair",
    "Subspace",
    "TolerancePolicy",
    "eval_additive_bound",
    "eval_apriori",
    "eval_block_discard",
    "eval_conjecture",
    "eval_cor_tangent",
    "eval_davis_kahan",
    "eval_quadratic_aposteriori",
    "eval_sun91",
    "eval_thm_mixed",
    "eval_weyl_additive",
    "eval_weyl_matching",
    "lhs_ritz_change",
    "principal_angles",
    "ritz",
    "strong_majorize",
    "weak_majorize",
]
