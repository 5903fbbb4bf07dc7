"""Experiment configuration and record types."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional

__all__ = ["ExperimentConfig", "TrialRecord", "SweepRow"]

SCALAR_KINDS = ("real", "complex", "both")


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int = 0
    trials: int = 10_000
    n_range: tuple[int, int] = (2, 20)
    # p is drawn from [1, max(1, floor(p_rule * n))]
    p_rule: float = 0.5
    eps_min: float = 1e-8
    eps_max: float = 1e-1
    eps_points: int = 29
    trials_per_eps: int = 10
    # upper end of the Figure 1 projector angle range; lower end is 0.1
    angle_max: float = math.pi / 4
    scalar_kind: str = "both"
    output_path: Optional[str] = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials >= 1 required")
        lo, hi = self.n_range
        if not 2 <= lo <= hi <= 64:
            raise ValueError(f"n_range must satisfy 2 <= min <= max <= 64, got {self.n_range}")
        if not 0 < self.p_rule <= 1:
            raise ValueError("p_rule must be in (0, 1]")
        if not 0 < self.eps_min < self.eps_max:
            raise ValueError("eps grid needs 0 < eps_min < eps_max")
        if self.eps_points < 2:
            raise ValueError("eps grid needs at least 2 points")
        if self.trials_per_eps < 1:
            raise ValueError("trials_per_eps >= 1 required")
        if not 0.1 < self.angle_max < math.pi / 2:
            raise ValueError("angle_max must lie in (0.1, pi/2)")
        if self.scalar_kind not in SCALAR_KINDS:
            raise ValueError(f"scalar_kind must be one of {SCALAR_KINDS}")

    def header(self) -> dict:
        d = asdict(self)
        d["n_range"] = list(self.n_range)
        d.pop("output_path")
        d["ensemble"] = "gaussian"
        d["rng"] = "numpy PCG64 via SeedSequence([seed, trial_id])"
        return d


@dataclass
class TrialRecord:
    trial_id: int
    n: int
    p: int
    kind: str
    x_mode: str
    skipped: bool = False
    worst: dict = field(default_factory=dict)
    evaluated: list = field(default_factory=list)
    elapsed: float = 0.0

    def to_dict(self) -> dict:
        # elapsed is wall-clock and would break byte-identical output files
        return {
            "trial_id": self.trial_id,
            "n": self.n,
            "p": self.p,
            "kind": self.kind,
            "x_mode": self.x_mode,
            "skipped": self.skipped,
            "worst": dict(sorted(self.worst.items())),
        }


@dataclass(frozen=True)
class SweepRow:
    eps: float
    max_lhs: float
    max_mixed_rhs: float
    max_weyl_rhs: float
