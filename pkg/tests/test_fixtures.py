from __future__ import annotations

import json
import shutil
from pathlib import Path

from hmer.emitter import tokenize_latex
from hmer.fixtures import bless, fixture_check
from hmer.metrics import load_ground_truth

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def test_pristine_fixtures_pass():
    results = fixture_check(FIXTURES)
    assert len(results) >= 9
    assert [r.name for r in results if not r.ok] == []


def test_corrupting_one_fixture_fails_only_that_one(tmp_path):
    shutil.copytree(FIXTURES, tmp_path / "fx")
    target = tmp_path / "fx" / "figure4_line2" / "expected.latex"
    target.write_text(target.read_text().replace("y", "z", 1))
    results = {r.name: r for r in fixture_check(tmp_path / "fx")}
    failed = [name for name, r in results.items() if not r.ok]
    assert failed == ["figure4_line2"]
    assert "expected.latex: line 1" in results["figure4_line2"].message


def test_bless_restores(tmp_path):
    shutil.copytree(FIXTURES, tmp_path / "fx")
    (tmp_path / "fx" / "orphan" / "expected.report.json").write_text("{}\n")
    bless(tmp_path / "fx")
    assert all(r.ok for r in fixture_check(tmp_path / "fx"))


def test_check_never_writes(tmp_path):
    shutil.copytree(FIXTURES, tmp_path / "fx")
    target = tmp_path / "fx" / "single_symbol" / "expected.latex"
    target.write_text("stale\n")
    fixture_check(tmp_path / "fx")
    assert target.read_text() == "stale\n"


def test_figure4_line3_ground_truth_tokenizes():
    [(image_id, latex)] = load_ground_truth(FIXTURES / "figure4_line3" / "gt.tsv")
    assert latex == r"y_{BD} = -\frac{4}{3}X + b"
    assert len(tokenize_latex(latex)) == 18


def test_comparison_fixture_scores():
    report = json.loads((FIXTURES / "figure5_comparison" / "expected.report.json").read_text())
    assert [e["edit_distance"] for e in report["per_expression"]] == [1, 1, 1, 1]
    assert (report["exprate"], report["exprate_le1"]) == (0.0, 1.0)
