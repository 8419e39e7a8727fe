from __future__ import annotations

import json
import math
import random

import pytest

from hmer.errors import InputError
from hmer.metrics import REFERENCE_ROW, edit_distance, evaluate, format_table, load_ground_truth, load_predictions

ALPHABET = "abc+-"


def naive_distance(a, b):
    """Exhaustive recursion, no memoization."""
    if not a:
        return len(b)
    if not b:
        return len(a)
    return min(
        naive_distance(a[1:], b) + 1,
        naive_distance(a, b[1:]) + 1,
        naive_distance(a[1:], b[1:]) + (a[0] != b[0]),
    )


def _seq(rng, max_len=8):
    return [rng.choice(ALPHABET) for _ in range(rng.randint(0, max_len))]


def test_edit_distance_examples():
    assert edit_distance(list("abc"), list("abc")) == 0
    assert edit_distance(list("abc"), list("abd")) == 1
    assert edit_distance([], list("abc")) == 3
    assert edit_distance(["\\frac", "{"], ["\\frac"]) == 1


def test_edit_distance_against_naive_recursion_sample():
    rng = random.Random(8)
    for _ in range(100):
        a, b = _seq(rng, 6), _seq(rng, 6)
        assert edit_distance(a, b) == naive_distance(a, b)


def test_all_exact():
    gts = [("a", ["x"]), ("b", ["y", "+", "1"])]
    r = evaluate(gts, gts)
    assert (r.exprate, r.exprate_le1, r.exprate_le2) == (1.0, 1.0, 1.0)


def test_crafted_rates():
    gts = [(f"e{i}", ["x", "+", "1"]) for i in range(10)]
    preds = [(f"e{i}", ["x", "+", "1"]) for i in range(6)]
    preds += [("e6", ["x", "+", "2"]), ("e7", ["x", "+"]), ("e8", ["y", "+", "2"]), ("e9", list("abcde"))]
    distances = [edit_distance(p, dict(gts)[i]) for i, p in preds]
    assert sorted(distances) == [0] * 6 + [1, 1, 2, 5]
    r = evaluate(preds, gts)
    assert (r.exprate, r.exprate_le1, r.exprate_le2) == (0.6, 0.8, 0.9)


def test_missing_prediction_is_a_miss():
    r = evaluate([("a", ["x"])], [("a", ["x"]), ("b", ["y"])])
    assert r.exprate == 0.5 and r.exprate_le2 == 0.5
    assert dict(r.per_expression)["b"] == math.inf
    assert r.to_dict()["per_expression"][1] == {"image_id": "b", "edit_distance": None}


def test_duplicate_prediction_rejected():
    with pytest.raises(InputError, match="duplicate"):
        evaluate([("a", ["x"]), ("a", ["y"])], [("a", ["x"])])


def test_prediction_without_ground_truth_rejected():
    with pytest.raises(InputError, match="zz"):
        evaluate([("zz", ["x"])], [("a", ["x"])])


def test_empty_ground_truth():
    assert evaluate([], []).exprate == 0.0


def test_table_format():
    r = evaluate([("a", ["x"])], [("a", ["x"])])
    text = format_table(r)
    assert "100.00%" in text and "ExpRate" in text
    assert "published" not in text


def test_reference_row_is_labelled():
    text = format_table(evaluate([("a", ["x"])], [("a", ["x"])]), paper_baseline=True)
    assert "67.82%" in text and "82.91%" in text and "88.37%" in text
    assert "not reproduced" in text
    assert REFERENCE_ROW[1:] == (0.6782, 0.8291, 0.8837)


def test_loaders(tmp_path):
    gt = tmp_path / "gt.tsv"
    gt.write_text("a\tx^2\n\nb\ty\n")
    assert load_ground_truth(gt) == [("a", "x^2"), ("b", "y")]
    pred = tmp_path / "p.jsonl"
    pred.write_text(json.dumps({"image_id": "a", "latex": "x^2"}) + "\n"
                    + json.dumps({"image_id": "b", "latex": "ignored", "tokens": ["y"]}) + "\n")
    assert load_predictions(pred) == [("a", ["x", "^", "{", "2", "}"]), ("b", ["y"])]


def test_bad_gt_line(tmp_path):
    gt = tmp_path / "gt.tsv"
    gt.write_text("no tab here\n")
    with pytest.raises(InputError):
        load_ground_truth(gt)
