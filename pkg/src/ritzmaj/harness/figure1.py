"""Additive perturbation sweep: mixed dilation bound versus Weyl's bound.

Two rank-one orthogonal projectors in R^2 at an acute angle are perturbed by
``eps * E`` with ``E`` symmetric and ``||E|| = 1``. For every ``eps`` on a
geometric grid we record the largest eigenvalue change, the largest entry of
the mixed (dilation) bound and the largest entry of Weyl's bound, maximized
over the repetitions.

Each repetition fixes its projectors and perturbation directions once and
reuses them along the whole grid, so the curves are smooth in ``eps``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..dilation import eval_additive_bound, eval_weyl_additive
from .config import ExperimentConfig, SweepRow
from .generators import trial_rng

__all__ = [
    "CSV_HEADER",
    "ANGLE_MIN",
    "Repetition",
    "eps_grid",
    "draw_repetition",
    "sweep_point",
    "run_figure1",
    "fit_loglog_slope",
    "figure1_slopes",
    "rows_to_csv",
    "write_csv",
]

CSV_HEADER = ("eps", "max_lhs", "max_mixed_rhs", "max_weyl_rhs")
ANGLE_MIN = 0.1
SLOPE_WINDOW = (1e-6, 1e-2)


@dataclass(frozen=True)
class Repetition:
    F0: np.ndarray
    G0: np.ndarray
    EF: np.ndarray
    EG: np.ndarray
    angle: float


def eps_grid(config: ExperimentConfig) -> np.ndarray:
    return np.geomspace(config.eps_min, config.eps_max, config.eps_points)


def _rank_one(a: float) -> np.ndarray:
    u = np.array([math.cos(a), math.sin(a)])
    return np.outer(u, u)


def _unit_symmetric(rng: np.random.Generator) -> np.ndarray:
    M = rng.standard_normal((2, 2))
    M = 0.5 * (M + M.T)
    return M / np.linalg.norm(M, 2)


def draw_repetition(config: ExperimentConfig, rep: int) -> Repetition:
    rng = trial_rng(config.seed, rep)
    base = rng.uniform(0.0, math.pi)
    angle = rng.uniform(ANGLE_MIN, config.angle_max)
    return Repetition(
        F0=_rank_one(base),
        G0=_rank_one(base + angle),
        EF=_unit_symmetric(rng),
        EG=_unit_symmetric(rng),
        angle=angle,
    )


def sweep_point(rep: Repetition, eps: float) -> tuple[float, float, float]:
    """Largest entries of lhs, mixed rhs and Weyl rhs for one repetition."""
    F = rep.F0 + eps * rep.EF
    G = rep.G0 + eps * rep.EG
    mixed = eval_additive_bound(F, G)
    weyl = eval_weyl_additive(F, G)
    return float(weyl.lhs[0]), float(mixed.rhs[0]), float(weyl.rhs[0])


def run_figure1(config: ExperimentConfig) -> list[SweepRow]:
    reps = [draw_repetition(config, r) for r in range(config.trials_per_eps)]
    rows = []
    for eps in eps_grid(config):
        vals = np.array([sweep_point(rep, float(eps)) for rep in reps])
        m = vals.max(axis=0)
        rows.append(SweepRow(float(eps), float(m[0]), float(m[1]), float(m[2])))
    return rows


def fit_loglog_slope(rows, column: str = "max_mixed_rhs", window=SLOPE_WINDOW) -> float:
    """Least-squares slope of ``log(value)`` against ``log(eps)`` inside ``window``.

    ``rows`` are :class:`SweepRow` objects or ``(eps, value)`` pairs.
    """
    lo, hi = window
    pts = []
    for r in rows:
        eps, val = (r.eps, getattr(r, column)) if isinstance(r, SweepRow) else r
        # a small relative slack keeps grid points that land on the window edge
        if lo * (1 - 1e-9) <= eps <= hi * (1 + 1e-9):
            pts.append((eps, val))
    if len(pts) < 3:
        raise ValueError(f"need at least 3 points in window {window}, got {len(pts)}")
    x, y = np.array(pts).T
    if np.any(y <= 0) or np.any(x <= 0):
        raise ValueError("nonpositive value in slope window")
    slope, _ = np.polyfit(np.log(x), np.log(y), 1)
    return float(slope)


def figure1_slopes(rows, window=SLOPE_WINDOW) -> dict[str, float]:
    return {c: fit_loglog_slope(rows, c, window) for c in CSV_HEADER[1:]}


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([repr(r.eps), repr(r.max_lhs), repr(r.max_mixed_rhs), repr(r.max_weyl_rhs)])
    return buf.getvalue()


def write_csv(path, rows) -> None:
    Path(path).write_text(rows_to_csv(rows), encoding="ascii")
