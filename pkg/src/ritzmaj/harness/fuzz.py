"""Random-trial driver for the proven bounds and the conjecture."""

from __future__ import annotations

import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable

from .. import bounds as B
from ..bounds import BoundId, BoundReport, RitzPair
from ..exceptions import GapConditionError
from ..majorization import MajorizationResult
from ..rayleigh_ritz import residual_lemma
from .artifacts import write_counterexample
from .config import ExperimentConfig, TrialRecord
from .generators import gen_hermitian, gen_invariant_subspace, gen_subspace, trial_rng

log = logging.getLogger(__name__)

__all__ = [
    "EVALUATORS",
    "THEOREM_CHECKS",
    "CONJECTURE_CHECKS",
    "ProvenBoundViolation",
    "FuzzSummary",
    "draw_trial",
    "run_trial",
    "run_fuzz",
]

# largest principal angle allowed in a fuzz trial
ACUTE_MARGIN = 1e-8

EVALUATORS: dict[BoundId, Callable[[RitzPair], BoundReport]] = {
    BoundId.conjecture_cos: lambda q: B.eval_conjecture(q, variant="cos"),
    BoundId.conjecture_tan: lambda q: B.eval_conjecture(q, variant="tan"),
    BoundId.thm_mixed_cos: lambda q: B.eval_thm_mixed(q, variant="cos"),
    BoundId.thm_mixed_squared: lambda q: B.eval_thm_mixed(q, variant="squared"),
    BoundId.thm_mixed_scaled: lambda q: B.eval_thm_mixed(q, variant="scaled"),
    BoundId.cor_tan_cosmax: lambda q: B.eval_cor_tangent(q, variant="cosmax"),
    BoundId.cor_tan_squared: lambda q: B.eval_cor_tangent(q, variant="squared"),
    BoundId.cor_tan_scaled: lambda q: B.eval_cor_tangent(q, variant="scaled"),
    BoundId.apriori_sin: lambda q: B.eval_apriori(q, invariant_x=False),
    BoundId.apriori_sin_squared: lambda q: B.eval_apriori(q, invariant_x=True),
    BoundId.sun91: lambda q: B.eval_sun91(q),
    BoundId.weyl_matching: lambda q: B.eval_weyl_matching(q.A, q.Y),
    BoundId.davis_kahan_sin: lambda q: B.eval_davis_kahan(q, variant="sin"),
    BoundId.davis_kahan_tan: lambda q: B.eval_davis_kahan(q, variant="tan"),
    BoundId.quad_apost_sin: lambda q: B.eval_quadratic_aposteriori(q, variant="sin"),
    BoundId.quad_apost_tan: lambda q: B.eval_quadratic_aposteriori(q, variant="tan"),
}

# names of the two residual-lemma relations, checked alongside the bounds
LEMMA_CHECKS = ("lemma_px_ry", "lemma_py_rx")

ALWAYS = (
    BoundId.thm_mixed_cos,
    BoundId.thm_mixed_squared,
    BoundId.thm_mixed_scaled,
    BoundId.cor_tan_cosmax,
    BoundId.cor_tan_squared,
    BoundId.cor_tan_scaled,
    BoundId.apriori_sin,
)
INVARIANT_ONLY = (
    BoundId.apriori_sin_squared,
    BoundId.sun91,
)
GAP_DEPENDENT = (
    BoundId.davis_kahan_sin,
    BoundId.davis_kahan_tan,
    BoundId.quad_apost_sin,
    BoundId.quad_apost_tan,
)
THEOREM_CHECKS = (
    tuple(b.value for b in ALWAYS + INVARIANT_ONLY + (BoundId.weyl_matching,) + GAP_DEPENDENT)
    + LEMMA_CHECKS
)
CONJECTURE_CHECKS = (BoundId.conjecture_cos.value, BoundId.conjecture_tan.value)


class ProvenBoundViolation(RuntimeError):
    def __init__(self, trial_id: int, check: str, margin: float, artifact: Path | None):
        self.trial_id = trial_id
        self.check = check
        self.margin = margin
        self.artifact = artifact
        super().__init__(
            f"proven bound {check} violated in trial {trial_id} (margin {margin:.3e}); "
            f"artifact: {artifact}"
        )


@dataclass
class CheckStats:
    evaluations: int = 0
    violations: int = 0
    worst_margin: float = math.inf

    def add(self, margin: float, holds: bool) -> None:
        self.evaluations += 1
        self.violations += int(not holds)
        self.worst_margin = min(self.worst_margin, margin)


@dataclass
class FuzzSummary:
    trials: int = 0
    skipped: int = 0
    checks: dict = field(default_factory=dict)
    counterexamples: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def proven_violations(self) -> int:
        return sum(s.violations for k, s in self.checks.items() if k in THEOREM_CHECKS)

    @property
    def conjecture_violations(self) -> int:
        return sum(s.violations for k, s in self.checks.items() if k in CONJECTURE_CHECKS)

    def table(self) -> str:
        lines = [f"{'check':<22}{'evals':>8}{'viol':>6}{'worst margin':>16}"]
        for name, s in sorted(self.checks.items()):
            lines.append(f"{name:<22}{s.evaluations:>8}{s.violations:>6}{s.worst_margin:>16.3e}")
        lines.append(f"trials={self.trials} skipped={self.skipped} elapsed={self.elapsed:.1f}s")
        return "\n".join(lines)


@dataclass
class Trial:
    trial_id: int
    n: int
    p: int
    kind: str
    x_mode: str
    pair: RitzPair


def draw_trial(config: ExperimentConfig, trial_id: int) -> Trial:
    """Draw ``A``, then ``Y``, then ``X`` (random or A-invariant, alternating)."""
    rng = trial_rng(config.seed, trial_id)
    lo, hi = config.n_range
    n = int(rng.integers(lo, hi + 1))
    pmax = max(1, int(math.floor(config.p_rule * n)))
    p = int(rng.integers(1, pmax + 1))
    if config.scalar_kind == "both":
        kind = "real" if (trial_id // 2) % 2 == 0 else "complex"
    else:
        kind = config.scalar_kind
    A = gen_hermitian(rng, n, kind)
    Y = gen_subspace(rng, n, p, kind)
    if trial_id % 2 == 1:
        X = gen_invariant_subspace(rng, A, p)
        x_mode = "invariant"
    else:
        X = gen_subspace(rng, n, p, kind)
        x_mode = "random"
    return Trial(trial_id, n, p, kind, x_mode, RitzPair(A, X, Y))


def _selected(which: str) -> tuple[bool, bool]:
    if which not in ("conjecture", "theorems", "all"):
        raise ValueError(f"unknown check set {which!r}")
    return which in ("theorems", "all"), which in ("conjecture", "all")


def run_trial(config: ExperimentConfig, trial_id: int, which: str = "all"):
    """Evaluate one trial.

    Returns the record and a list of ``(check, report_or_result)`` for every
    failed check.
    """
    t0 = time.perf_counter()
    do_thm, do_conj = _selected(which)
    tr = draw_trial(config, trial_id)
    pair = tr.pair
    rec = TrialRecord(trial_id, tr.n, tr.p, tr.kind, tr.x_mode)
    failures: list[tuple[str, object]] = []

    def note(name: str, res) -> None:
        verdict = res.verdict if isinstance(res, BoundReport) else res
        rec.worst[name] = verdict.worst_margin
        rec.evaluated.append(name)
        if not verdict.holds:
            failures.append((name, res))

    if pair.angles.max >= math.pi / 2 - ACUTE_MARGIN:
        rec.skipped = True
        rec.elapsed = time.perf_counter() - t0
        return rec, failures

    if do_thm:
        for bid in ALWAYS:
            note(bid.value, EVALUATORS[bid](pair))
        lx, ly = residual_lemma(pair.A, pair.X, pair.Y)
        note(LEMMA_CHECKS[0], lx)
        note(LEMMA_CHECKS[1], ly)
        if pair.n <= B.EXHAUSTIVE_SEARCH_CAP:
            note(BoundId.weyl_matching.value, EVALUATORS[BoundId.weyl_matching](pair))
        if pair.x_invariant:
            for bid in INVARIANT_ONLY:
                note(bid.value, EVALUATORS[bid](pair))
            for bid in GAP_DEPENDENT:
                try:
                    rep = EVALUATORS[bid](pair)
                except GapConditionError:
                    continue
                note(bid.value, rep)
    if do_conj:
        for name in CONJECTURE_CHECKS:
            note(name, EVALUATORS[BoundId(name)](pair))
    rec.elapsed = time.perf_counter() - t0
    return rec, failures


def _trial_chunk(args) -> list:
    config, ids, which = args
    out = []
    for t in ids:
        rec, failures = run_trial(config, t, which)
        out.append((rec, [(name, _dump(res)) for name, res in failures]))
    return out


def _dump(res) -> dict:
    if isinstance(res, BoundReport):
        return res.to_dict()
    assert isinstance(res, MajorizationResult)
    return {"margins": res.margins.tolist(), "holds": res.holds}


def _iter_results(config: ExperimentConfig, which: str, jobs: int) -> Iterable:
    ids = range(config.trials)
    if jobs <= 1:
        for t in ids:
            rec, failures = run_trial(config, t, which)
            yield rec, failures
        return
    chunk = max(1, config.trials // (jobs * 8))
    batches = [(config, list(ids[i:i + chunk]), which) for i in range(0, config.trials, chunk)]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        # map preserves submission order, so merging is by trial id
        for batch in ex.map(_trial_chunk, batches):
            yield from batch


def run_fuzz(config: ExperimentConfig, which: str = "all", *, out_dir=None, jobs: int = 1,
             abort_on_proven: bool = True) -> FuzzSummary:
    """Run ``config.trials`` random trials.

    Conjecture violations are written to ``out_dir/counterexamples`` and the
    run continues. A proven-bound violation writes an artifact and raises
    :class:`ProvenBoundViolation` (unless ``abort_on_proven`` is false).
    If ``config.output_path`` is set, one JSON line per trial is written
    there in trial-id order.
    """
    _selected(which)
    t0 = time.perf_counter()
    summary = FuzzSummary()
    out_dir = Path(out_dir) if out_dir is not None else Path(".")
    cx_dir = out_dir / "counterexamples"
    stream = open(config.output_path, "w", encoding="ascii", newline="\n") if config.output_path else None
    try:
        if stream is not None:
            stream.write(json.dumps({"config": config.header(), "which": which}, sort_keys=True) + "\n")
        for rec, failures in _iter_results(config, which, jobs):
            summary.trials += 1
            summary.skipped += int(rec.skipped)
            failed = {f for f, _ in failures}
            for name, margin in rec.worst.items():
                summary.checks.setdefault(name, CheckStats()).add(margin, name not in failed)
            if stream is not None:
                stream.write(json.dumps(rec.to_dict(), sort_keys=True) + "\n")
            for name, res in failures:
                path = _emit(cx_dir, config, rec, name, res)
                if name in CONJECTURE_CHECKS:
                    summary.counterexamples.append(str(path))
                    log.warning("conjecture counterexample: %s", path)
                elif abort_on_proven:
                    raise ProvenBoundViolation(rec.trial_id, name, rec.worst[name], path)
    finally:
        if stream is not None:
            stream.close()
    summary.elapsed = time.perf_counter() - t0
    return summary


def _emit(directory: Path, config: ExperimentConfig, rec: TrialRecord, name: str, res) -> Path:
    # regenerate the trial from its seed so the artifact holds the exact inputs
    tr = draw_trial(config, rec.trial_id)
    pair = tr.pair
    if isinstance(res, dict) and "bound_id" in res:
        report = EVALUATORS[BoundId(res["bound_id"])](pair)
    elif isinstance(res, BoundReport):
        report = res
    else:
        # residual-lemma failure: store it under the closest bound for replay
        report = EVALUATORS[BoundId.cor_tan_cosmax](pair)
    return write_counterexample(
        directory, report, seed=config.seed, trial_id=rec.trial_id,
        matrices={"A": pair.A, "X": pair.X.basis, "Y": pair.Y.basis},
    )
