"""Acceptance criteria, one test per criterion.

Each test prints a single ``CRITERION n: PASS|FAIL ...`` line (shown even
under output capture) and then asserts. ``python3 tests/test_acceptance.py``
runs the same module through pytest in quiet mode.
"""

import filecmp
import math
import sys
import time

import numpy as np
import pytest

from ritzmaj.bounds import eval_block_discard, eval_conjecture, eval_thm_mixed
from ritzmaj.dilation import (
    coordinate_projector,
    dilation_projector,
    dilation_residual_singvals,
    dilation_subspace,
)
from ritzmaj.exceptions import SingularBlockError
from ritzmaj.harness import cli
from ritzmaj.harness.appendix import format_table, run_appendix_suite
from ritzmaj.harness.config import ExperimentConfig
from ritzmaj.harness.figure1 import figure1_slopes, run_figure1
from ritzmaj.harness.fuzz import CONJECTURE_CHECKS, THEOREM_CHECKS, run_fuzz
from ritzmaj.harness.generators import gen_hermitian, gen_unitary, trial_rng
from ritzmaj.numeric import write_matrix
from ritzmaj.rayleigh_ritz import ritz
from ritzmaj.subspaces import Subspace, projector_product_singvals

FUZZ_TRIALS = 10_000


def report(n: int, ok: bool, detail: str) -> None:
    line = f"CRITERION {n}: {'PASS' if ok else 'FAIL'} {detail}"
    capman = _capture_manager()
    if capman is not None:
        with capman.global_and_fixture_disabled():
            print("\n" + line, flush=True)
    else:
        print(line, flush=True)


_config = None


def _capture_manager():
    if _config is None:
        return None
    return _config.pluginmanager.getplugin("capturemanager")


@pytest.fixture(scope="module", autouse=True)
def _grab_config(request):
    global _config
    _config = request.config
    yield
    _config = None


@pytest.fixture(scope="module")
def fuzz_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("fuzz")
    cfg = ExperimentConfig(seed=2024, trials=FUZZ_TRIALS, n_range=(2, 20), p_rule=0.5,
                           scalar_kind="both")
    t0 = time.perf_counter()
    summary = run_fuzz(cfg, "all", out_dir=out, abort_on_proven=False)
    return summary, time.perf_counter() - t0, out


def test_criterion_1_proven_suite(fuzz_run):
    summary, elapsed, _ = fuzz_run
    checks = {k: v for k, v in summary.checks.items() if k in THEOREM_CHECKS}
    missing = set(THEOREM_CHECKS) - set(checks)
    viol = sum(s.violations for s in checks.values())
    worst = min(s.worst_margin for s in checks.values())
    ok = viol == 0 and not missing and elapsed < 120
    report(1, ok, f"trials={summary.trials} checks={len(checks)} violations={viol} "
                  f"worst_margin={worst:.2e} missing={sorted(missing)} time={elapsed:.1f}s")
    assert not missing
    assert viol == 0
    assert elapsed < 120


def test_criterion_2_conjecture_suite(fuzz_run):
    summary, _, out = fuzz_run
    evals = sum(summary.checks[c].evaluations for c in CONJECTURE_CHECKS)
    files = sorted((out / "counterexamples").glob("counterexample_*conjecture*.json")) \
        if (out / "counterexamples").exists() else []
    ok = summary.conjecture_violations == 0 and not files and evals == 2 * (summary.trials - summary.skipped)
    worst = min(summary.checks[c].worst_margin for c in CONJECTURE_CHECKS)
    report(2, ok, f"evaluations={evals} counterexample_files={len(files)} worst_margin={worst:.2e}")
    assert ok


def test_criterion_3_scalar_equality():
    A = np.diag([1.0, 2.0, 3.0])
    X = Subspace(np.eye(3, 1, dtype=complex))
    Y = Subspace(np.array([[1.0], [1.0], [0.0]], dtype=complex) / math.sqrt(2))
    cos = eval_thm_mixed(A, X, Y, "cos")
    sq = eval_thm_mixed(A, X, Y, "squared")
    sc = eval_thm_mixed(A, X, Y, "scaled")
    eq = abs(cos.rhs[0] - 0.5) <= 1e-12 and abs(cos.lhs[0] - 0.5) <= 1e-12
    # the squared variant bounds lhs^2, so its rhs is compared after a square root
    same = abs(math.sqrt(sq.rhs[0]) - cos.rhs[0]) <= 1e-12 and abs(sc.rhs[0] - cos.rhs[0]) <= 1e-12
    conj = eval_conjecture(A, X, Y, "cos")
    ok = eq and same and abs(conj.rhs[0] - 0.5) <= 1e-12
    report(3, ok, f"lhs={float(cos.lhs[0])!r} rhs_cos={float(cos.rhs[0])!r} "
                  f"sqrt(rhs_sq)={math.sqrt(sq.rhs[0])!r} rhs_scaled={float(sc.rhs[0])!r}")
    assert ok


def test_criterion_4_figure1():
    cfg = ExperimentConfig(seed=0, eps_min=1e-8, eps_max=1e-1, eps_points=29, trials_per_eps=10)
    t0 = time.perf_counter()
    rows = run_figure1(cfg)
    elapsed = time.perf_counter() - t0
    s = figure1_slopes(rows, (1e-6, 1e-2))
    below = all(r.max_mixed_rhs < r.max_weyl_rhs for r in rows if r.eps <= 1e-2 * (1 + 1e-12))
    ok = (abs(s["max_mixed_rhs"] - 0.5) <= 0.1 and abs(s["max_lhs"] - 1.0) <= 0.1
          and abs(s["max_weyl_rhs"]) < 0.05 and below and elapsed < 30 and len(rows) == 29)
    report(4, ok, f"slope_mixed={s['max_mixed_rhs']:.4f} slope_lhs={s['max_lhs']:.4f} "
                  f"slope_weyl={s['max_weyl_rhs']:.4f} mixed<weyl(eps<=1e-2)={below} time={elapsed:.1f}s")
    assert ok


def test_criterion_5_appendix():
    results, remark = run_appendix_suite(trials=1000, seed=0)
    ok = all(r.passed and r.instances == 1000 for r in results) and remark.passed and remark.instances == 100
    failed = [r.name for r in results if not r.passed]
    report(5, ok, f"properties={len(results)} failed={failed} remark_instances={remark.instances} "
                  f"remark_elementwise_tighter={remark.elementwise_tighter}")
    if not ok:
        print(format_table(results, remark))
    assert ok


def test_criterion_6_block_discard():
    rep = eval_block_discard(np.array([[0.0, 1.0], [1.0, 0.0]]), 1, [0])
    eq = abs(rep.lhs[0] - 1) <= 1e-12 and abs(rep.rhs[0] - 1) <= 1e-12
    trials = held = singular = 0
    worst = math.inf
    for t in range(1000):
        r = trial_rng(606, t)
        n = int(r.integers(2, 11))
        k = int(r.integers(1, n))
        A = gen_hermitian(r, n, "real" if t % 2 == 0 else "complex")
        idx = np.sort(r.choice(n, size=k, replace=False))
        try:
            b = eval_block_discard(A, k, idx)
        except SingularBlockError:
            singular += 1
            continue
        trials += 1
        held += b.holds
        worst = min(worst, b.worst_margin)
    ok = eq and held == trials and trials > 900
    report(6, ok, f"example lhs={float(rep.lhs[0])!r} rhs={float(rep.rhs[0])!r}; "
                  f"random held {held}/{trials} (singular X1 skipped: {singular}) worst_margin={worst:.2e}")
    assert ok


def test_criterion_7_dilation_identities():
    worst_idem = worst_res = worst_ritz = 0.0
    rank_ok = True
    for t in range(1000):
        r = trial_rng(707, t)
        n = int(r.integers(1, 9))
        U = gen_unitary(r, n, "real" if t % 2 == 0 else "complex")
        F = (U * r.uniform(0, 1, n)) @ U.conj().T
        F = 0.5 * (F + F.conj().T)
        P = dilation_projector(F)
        worst_idem = max(worst_idem, float(np.max(np.abs(P @ P - P))))
        rank_ok &= int(np.linalg.matrix_rank(P, tol=1e-8)) == n
        S = dilation_subspace(F)
        Z = Subspace(np.eye(2 * n, n, dtype=complex))
        geo = projector_product_singvals(S, Z)
        closed = dilation_residual_singvals(F)
        # geometric values are closed form plus zeros
        worst_res = max(worst_res, float(np.max(np.abs(geo[:n] - closed))),
                        float(np.max(np.abs(geo[n:]), initial=0.0)))
        lam = ritz(coordinate_projector(n), S).ritz_values
        worst_ritz = max(worst_ritz, float(np.max(np.abs(lam - np.sort(np.linalg.eigvalsh(F))[::-1]))))
    ok = rank_ok and max(worst_idem, worst_res, worst_ritz) <= 1e-10
    report(7, ok, f"idempotency={worst_idem:.1e} residual={worst_res:.1e} ritz={worst_ritz:.1e} rank_ok={rank_ok}")
    assert ok


def test_criterion_8_determinism(tmp_path):
    write_matrix(tmp_path / "A.mat", np.diag([1.0, 2.0, 3.0]))
    write_matrix(tmp_path / "X.mat", np.eye(3, 1))
    write_matrix(tmp_path / "Y.mat", np.array([[1.0], [1.0], [0.0]]) / math.sqrt(2))
    write_matrix(tmp_path / "B.mat", np.array([[0.0, 1.0], [1.0, 0.0]]))
    d = str(tmp_path)

    def runs(tag):
        return {
            "bounds": ["bounds", "--matrix", f"{d}/A.mat", "--x", f"{d}/X.mat", "--y", f"{d}/Y.mat",
                       "--json", f"{d}/bounds_{tag}.json", "--artifacts", d],
            "fuzz": ["fuzz", "--trials", "300", "--seed", "5", "--out", f"{d}/fuzz_{tag}.jsonl",
                     "--artifacts", d] + (["--jobs", "2"] if tag == "b" else []),
            "figure1": ["figure1", "--seed", "3", "--out", f"{d}/fig1_{tag}.csv"],
            "appendix": ["appendix", "--trials", "50", "--seed", "4", "--out", f"{d}/app_{tag}.txt"],
            "block-discard": ["block-discard", "--matrix", f"{d}/B.mat", "--k", "1", "--eigs", "0",
                              "--json", f"{d}/bd_{tag}.json", "--artifacts", d],
        }

    outputs = {"bounds": "bounds_{}.json", "fuzz": "fuzz_{}.jsonl", "figure1": "fig1_{}.csv",
               "appendix": "app_{}.txt", "block-discard": "bd_{}.json"}
    codes = {}
    for tag in ("a", "b"):
        for name, argv in runs(tag).items():
            codes[(name, tag)] = cli.main(argv)
    same = {name: filecmp.cmp(tmp_path / f.format("a"), tmp_path / f.format("b"), shallow=False)
            for name, f in outputs.items()}
    ok = all(same.values()) and all(c == 0 for c in codes.values())
    report(8, ok, " ".join(f"{k}={'identical' if v else 'DIFFERENT'}" for k, v in same.items())
           + " (fuzz second run with 2 workers)")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
