"""Command line entry point.

Exit codes: 0 success, 1 usage or I/O error, 2 a proven bound was violated,
3 a conjecture counterexample was found (its artifact path is printed).
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

from ..bounds import BoundId, BoundReport, RitzPair, eval_block_discard
from ..exceptions import RitzMajError
from ..numeric import read_matrix
from ..subspaces import load_subspace
from .appendix import format_table, run_appendix_suite
from .artifacts import replay, write_counterexample
from .config import ExperimentConfig
from .figure1 import figure1_slopes, run_figure1, write_csv
from .fuzz import EVALUATORS, ProvenBoundViolation, run_fuzz

EXIT_OK, EXIT_USAGE, EXIT_PROVEN, EXIT_CONJECTURE = 0, 1, 2, 3

log = logging.getLogger("ritzmaj")


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for proven violations here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _write_json(path, payload) -> None:
    Path(path).write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n", encoding="ascii")


def _print_reports(reports: list[BoundReport]) -> None:
    print(f"{'bound':<22}{'holds':>6}{'worst margin':>15}  kind")
    for r in reports:
        kind = "conjecture" if r.conjectural else "proven"
        print(f"{r.bound_id.value:<22}{str(r.holds):>6}{r.worst_margin:>15.3e}  {kind}")


def _verdict_exit(reports, artifacts_dir, matrices) -> int:
    code = EXIT_OK
    for r in reports:
        if r.holds:
            continue
        path = write_counterexample(Path(artifacts_dir) / "counterexamples", r, matrices=matrices)
        if r.conjectural:
            print(f"conjecture counterexample ({r.bound_id.value}): {path}")
            if code == EXIT_OK:
                code = EXIT_CONJECTURE
        else:
            print(f"PROVEN BOUND VIOLATED ({r.bound_id.value}): {path}")
            code = EXIT_PROVEN
    return code


def cmd_bounds(args) -> int:
    A = read_matrix(args.matrix)
    X = load_subspace(args.x)
    Y = load_subspace(args.y)
    pair = RitzPair(A, X, Y)
    if args.bound == "all":
        ids = list(EVALUATORS)
    else:
        bid = BoundId(args.bound)
        if bid not in EVALUATORS:
            raise ValueError(f"bound {bid.value} is not evaluated on (A, X, Y); see its own subcommand")
        ids = [bid]
    reports, skipped = [], []
    for bid in ids:
        try:
            reports.append(EVALUATORS[bid](pair))
        except RitzMajError as e:
            if args.bound != "all":
                raise
            skipped.append((bid.value, str(e)))
    _print_reports(reports)
    for name, why in skipped:
        print(f"skipped {name}: {why}")
    if args.json:
        _write_json(args.json, {
            "reports": [r.to_dict() for r in reports],
            "skipped": [{"bound_id": n, "reason": w} for n, w in skipped],
        })
    return _verdict_exit(reports, args.artifacts, {"A": pair.A, "X": X.basis, "Y": Y.basis})


def cmd_fuzz(args) -> int:
    config = ExperimentConfig(
        seed=args.seed, trials=args.trials, n_range=(args.n_min, args.n_max),
        scalar_kind=args.kind, output_path=args.out,
    )
    try:
        summary = run_fuzz(config, args.check, out_dir=args.artifacts, jobs=args.jobs)
    except ProvenBoundViolation as e:
        print(str(e))
        return EXIT_PROVEN
    print(summary.table())
    if summary.counterexamples:
        for p in summary.counterexamples:
            print(f"conjecture counterexample: {p}")
        return EXIT_CONJECTURE
    return EXIT_OK


def cmd_figure1(args) -> int:
    config = ExperimentConfig(
        seed=args.seed, eps_min=args.eps_min, eps_max=args.eps_max,
        eps_points=args.points, trials_per_eps=args.trials_per_eps, angle_max=args.angle_max,
    )
    rows = run_figure1(config)
    write_csv(args.out, rows)
    slopes = figure1_slopes(rows)
    for name, s in slopes.items():
        print(f"slope {name}: {s:.4f}")
    return EXIT_OK


def cmd_appendix(args) -> int:
    results, remark = run_appendix_suite(args.trials, args.seed)
    table = format_table(results, remark)
    print(table)
    if args.out:
        Path(args.out).write_text(table + "\n", encoding="ascii")
    ok = all(r.passed for r in results) and remark.passed
    return EXIT_OK if ok else EXIT_PROVEN


def cmd_block_discard(args) -> int:
    A = read_matrix(args.matrix)
    try:
        eigs = [int(t) for t in args.eigs.split(",") if t.strip()]
    except ValueError:
        raise ValueError(f"--eigs must be comma separated integers, got {args.eigs!r}") from None
    rep = eval_block_discard(A, args.k, eigs)
    _print_reports([rep])
    print(f"lhs = {rep.lhs.tolist()}")
    print(f"rhs = {rep.rhs.tolist()}")
    if args.json:
        _write_json(args.json, rep.to_dict())
    return _verdict_exit([rep], args.artifacts, {"A": A})


def cmd_replay(args) -> int:
    rep = replay(args.artifact)
    _print_reports([rep])
    if rep.holds:
        return EXIT_OK
    return EXIT_CONJECTURE if rep.conjectural else EXIT_PROVEN


def _eps(s: str) -> float:
    v = float(s)
    if not v > 0 or not math.isfinite(v):
        raise argparse.ArgumentTypeError("must be a positive finite number")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ritzmaj", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("bounds", help="evaluate bounds for A, X, Y read from matrix files")
    b.add_argument("--matrix", required=True)
    b.add_argument("--x", required=True)
    b.add_argument("--y", required=True)
    b.add_argument("--bound", default="all", choices=["all"] + [k.value for k in EVALUATORS])
    b.add_argument("--json")
    b.add_argument("--artifacts", default=".", help="counterexamples/ is created here")
    b.set_defaults(func=cmd_bounds)

    f = sub.add_parser("fuzz", help="random trials for the proven bounds and the conjecture")
    f.add_argument("--trials", type=int, default=10_000)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--n-min", type=int, default=2)
    f.add_argument("--n-max", type=int, default=20)
    f.add_argument("--kind", choices=["real", "complex", "both"], default="both")
    f.add_argument("--check", choices=["conjecture", "theorems", "all"], default="all")
    f.add_argument("--jobs", type=int, default=1)
    f.add_argument("--out", help="JSON-lines trial records")
    f.add_argument("--artifacts", default=".", help="counterexamples/ is created here")
    f.set_defaults(func=cmd_fuzz)

    g = sub.add_parser("figure1", help="additive perturbation sweep, writes CSV")
    g.add_argument("--eps-min", type=_eps, default=1e-8)
    g.add_argument("--eps-max", type=_eps, default=1e-1)
    g.add_argument("--points", type=int, default=29)
    g.add_argument("--trials-per-eps", type=int, default=10)
    g.add_argument("--angle-max", type=float, default=math.pi / 4)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default="fig1.csv")
    g.set_defaults(func=cmd_figure1)

    a = sub.add_parser("appendix", help="property suite for the supporting inequalities")
    a.add_argument("--trials", type=int, default=1000)
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--out")
    a.set_defaults(func=cmd_appendix)

    d = sub.add_parser("block-discard", help="eigenvalue change after dropping off-diagonal blocks")
    d.add_argument("--matrix", required=True)
    d.add_argument("--k", type=int, required=True)
    d.add_argument("--eigs", required=True, help="0-based indices into the decreasing spectrum")
    d.add_argument("--json")
    d.add_argument("--artifacts", default=".", help="counterexamples/ is created here")
    d.set_defaults(func=cmd_block_discard)

    r = sub.add_parser("replay", help="re-evaluate a counterexample artifact")
    r.add_argument("artifact")
    r.set_defaults(func=cmd_replay)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (RitzMajError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
