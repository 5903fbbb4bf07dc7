"""Counterexample artifacts: write a failing trial to JSON and replay it."""

from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np

from ..bounds import BoundId, BoundReport, RitzPair
from ..subspaces import Subspace

__all__ = ["encode_matrix", "decode_matrix", "write_counterexample", "load_counterexample", "replay"]


def encode_matrix(M) -> dict:
    M = np.asarray(M, dtype=np.complex128)
    return {"shape": list(M.shape), "re": M.real.tolist(), "im": M.imag.tolist()}


def decode_matrix(d: dict) -> np.ndarray:
    return np.asarray(d["re"], dtype=float) + 1j * np.asarray(d["im"], dtype=float)


def write_counterexample(directory, report: BoundReport, *, seed=None, trial_id=None,
                         matrices: dict) -> Path:
    """Write ``matrices`` (e.g. ``A``, ``X``, ``Y``) and the report as one JSON file."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    tag = f"trial{trial_id}" if trial_id is not None else "input"
    path = directory / f"counterexample_{tag}_{report.bound_id.value}.json"
    payload = {
        "bound_id": report.bound_id.value,
        "seed": seed,
        "trial_id": trial_id,
        "matrices": {k: encode_matrix(v) for k, v in matrices.items()},
        "report": report.to_dict(),
    }
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n", encoding="ascii")
    os.replace(tmp, path)
    return path


def load_counterexample(path) -> dict:
    data = json.loads(Path(path).read_text(encoding="ascii"))
    data["matrices"] = {k: decode_matrix(v) for k, v in data["matrices"].items()}
    return data


def replay(path) -> BoundReport:
    """Re-evaluate the bound stored in an artifact from its saved matrices."""
    from .fuzz import EVALUATORS
    from ..dilation import eval_additive_bound

    data = load_counterexample(path)
    bid = BoundId(data["bound_id"])
    m = data["matrices"]
    if bid is BoundId.additive_dilation:
        return eval_additive_bound(m["F"], m["G"])
    if bid is BoundId.block_discard:
        from ..bounds import eval_block_discard

        ctx = data["report"]["context"]
        return eval_block_discard(m["A"], data["report"]["p"], ctx["indices"])
    pair = RitzPair(m["A"], Subspace(m["X"]), Subspace(m["Y"]))
    return EVALUATORS[bid](pair)
