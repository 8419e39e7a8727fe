"""Expression recognition rate with token-edit tolerance."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .errors import InputError

# Published figures of a trained detector pipeline, shown for comparison only.
REFERENCE_ROW = ("reference (published, not reproduced)", 0.6782, 0.8291, 0.8837)

MISS = math.inf


def edit_distance(a: Sequence, b: Sequence) -> int:
    """Token-level Levenshtein distance with unit costs."""
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, 1):
        cur = [i]
        for j, y in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x != y)))
        prev = cur
    return prev[-1]


@dataclass(frozen=True)
class EvalReport:
    n_expressions: int
    exprate: float
    exprate_le1: float
    exprate_le2: float
    per_expression: tuple = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "n_expressions": self.n_expressions,
            "exprate": self.exprate,
            "exprate_le1": self.exprate_le1,
            "exprate_le2": self.exprate_le2,
            # JSON has no infinity; a missing prediction is written as null
            "per_expression": [
                {"image_id": i, "edit_distance": None if d == MISS else d} for i, d in self.per_expression
            ],
        }


def evaluate(preds: Sequence[tuple[str, Sequence[str]]], gts: Sequence[tuple[str, Sequence[str]]]) -> EvalReport:
    """Score predictions against ground truth at tolerance 0, 1 and 2 token edits.

    Ground-truth ids with no prediction count as failures at every tolerance.
    """
    pred_map: dict[str, Sequence[str]] = {}
    for image_id, toks in preds:
        if image_id in pred_map:
            raise InputError(f"duplicate prediction for {image_id!r}")
        pred_map[image_id] = toks
    gt_map: dict[str, Sequence[str]] = {}
    for image_id, toks in gts:
        if image_id in gt_map:
            raise InputError(f"duplicate ground truth for {image_id!r}")
        gt_map[image_id] = toks
    stray = sorted(set(pred_map) - set(gt_map))
    if stray:
        raise InputError(f"predictions without ground truth: {stray[:5]}")

    per = []
    for image_id in sorted(gt_map):
        if image_id in pred_map:
            per.append((image_id, edit_distance(pred_map[image_id], gt_map[image_id])))
        else:
            per.append((image_id, MISS))
    n = len(per)

    def rate(k: int) -> float:
        return sum(1 for _, d in per if d <= k) / n if n else 0.0

    return EvalReport(n, rate(0), rate(1), rate(2), tuple(per))


def format_table(report: EvalReport, name: str = "hmer", paper_baseline: bool = False) -> str:
    rows = [(name, report.exprate, report.exprate_le1, report.exprate_le2)]
    if paper_baseline:
        rows.append(REFERENCE_ROW)
    width = max(len("Method"), *(len(r[0]) for r in rows))
    lines = [f"{'Method':<{width}}  {'ExpRate':>8}  {'<=1':>8}  {'<=2':>8}"]
    for label, *rates in rows:
        lines.append(f"{label:<{width}}  " + "  ".join(f"{100 * r:>7.2f}%" for r in rates))
    if paper_baseline:
        lines.append("note: the reference row is a published figure, displayed for comparison; it was not computed here")
    return "\n".join(lines) + "\n"


def load_ground_truth(path) -> list[tuple[str, str]]:
    """Read ``image_id<TAB>latex`` lines."""
    out = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        if "\t" not in line:
            raise InputError(f"{path}:{lineno}: expected 'image_id<TAB>latex'")
        image_id, latex = line.split("\t", 1)
        out.append((image_id, latex))
    return out


def load_predictions(path) -> list[tuple[str, list[str]]]:
    """Read the JSON-lines output of ``hmer parse``; ``tokens`` wins over ``latex`` when both exist."""
    from .emitter import tokenize_latex

    out = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}:{lineno}: {exc.msg}") from None
        if "tokens" in obj:
            toks = list(obj["tokens"])
        elif "latex" in obj:
            toks = tokenize_latex(obj["latex"])
        else:
            raise InputError(f"{path}:{lineno}: line has neither 'tokens' nor 'latex'")
        out.append((obj["image_id"], toks))
    return out
