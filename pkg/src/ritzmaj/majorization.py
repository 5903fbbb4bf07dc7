"""Weak and strong majorization with an explicit tolerance contract.

``x`` is weakly majorized by ``y`` when every prefix sum of the decreasing
rearrangement of ``x`` is at most the corresponding prefix sum of ``y``.
The margins reported here are the per-prefix slacks ``sum(y) - sum(x)``, so a
relation holds exactly when no margin drops below ``-tol``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionError, NonFiniteError

__all__ = [
    "MajorizationResult",
    "check_tol",
    "prefix_margins",
    "weak_majorize",
    "strong_majorize",
    "decreasing",
    "pad_to",
]

CHECK_ATOL = 1e-12
CHECK_RTOL = 1e-10


@dataclass(frozen=True)
class MajorizationResult:
    holds: bool
    margins: np.ndarray
    worst_index: int
    sum_equal: bool
    tol: float

    @property
    def worst_margin(self) -> float:
        return float(self.margins[self.worst_index])


def decreasing(x) -> np.ndarray:
    """Real vector sorted in non-increasing order."""
    return np.sort(np.asarray(x, dtype=float).ravel())[::-1]


def pad_to(x, m: int) -> np.ndarray:
    """Append zeros to a nonnegative vector to reach length ``m``."""
    x = np.asarray(x, dtype=float).ravel()
    if x.size >= m:
        return x
    return np.concatenate([x, np.zeros(m - x.size)])


def _prepare(x, y) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise NonFiniteError("majorization inputs must be finite")
    if x.size != y.size:
        if np.all(x >= 0) and np.all(y >= 0):
            m = max(x.size, y.size)
            x, y = pad_to(x, m), pad_to(y, m)
        else:
            raise DimensionError(
                f"length mismatch {x.size} vs {y.size}; zero-padding is only "
                "allowed for nonnegative vectors"
            )
    return decreasing(x), decreasing(y)


def check_tol(x, y, atol: float = CHECK_ATOL, rtol: float = CHECK_RTOL) -> float:
    """Default verification tolerance ``atol + rtol * n * max(|x|_inf, |y|_inf, 1)``."""
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    n = max(x.size, y.size, 1)
    scale = max(np.max(np.abs(x), initial=0.0), np.max(np.abs(y), initial=0.0), 1.0)
    return atol + rtol * n * scale


def prefix_margins(x, y) -> np.ndarray:
    xs, ys = _prepare(x, y)
    return np.cumsum(ys) - np.cumsum(xs)


def weak_majorize(x, y, tol: float | None = None) -> MajorizationResult:
    """Test ``x`` weakly majorized by ``y``.

    >>> weak_majorize([2, 2], [3, 1]).holds
    True
    """
    xs, ys = _prepare(x, y)
    if tol is None:
        tol = check_tol(xs, ys)
    margins = np.cumsum(ys) - np.cumsum(xs)
    if margins.size == 0:
        return MajorizationResult(True, margins, 0, True, tol)
    worst = int(np.argmin(margins))
    holds = bool(margins[worst] >= -tol)
    sum_equal = bool(abs(margins[-1]) <= tol)
    return MajorizationResult(holds, margins, worst, sum_equal, tol)


def strong_majorize(x, y, tol: float | None = None) -> MajorizationResult:
    """Weak majorization plus equality of the total sums."""
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.size != y.size:
        raise DimensionError("strong majorization needs equal lengths")
    res = weak_majorize(x, y, tol)
    return MajorizationResult(
        res.holds and res.sum_equal, res.margins, res.worst_index, res.sum_equal, res.tol
    )
