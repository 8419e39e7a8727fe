"""Golden-file fixtures: rerun the pipeline on each fixture and diff against the stored bytes."""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .detections import load_detections_json
from .emitter import tokenize_latex
from .metrics import evaluate, load_ground_truth
from .pipeline import parse_batch, results_to_jsonl

DETECTIONS = "detections.json"
GROUND_TRUTH = "gt.tsv"
EXPECTED_LATEX = "expected.latex"
EXPECTED_REPORT = "expected.report.json"


@dataclass(frozen=True)
class FixtureResult:
    name: str
    ok: bool
    message: str = ""


def fixture_dirs(root) -> list[Path]:
    root = Path(root)
    return sorted(p for p in root.iterdir() if (p / DETECTIONS).is_file())


def produce(fixture_dir) -> dict[str, bytes]:
    """Pipeline outputs for one fixture, keyed by expected-file name."""
    fixture_dir = Path(fixture_dir)
    results = parse_batch(load_detections_json(fixture_dir / DETECTIONS))
    gts = [(i, tokenize_latex(s)) for i, s in load_ground_truth(fixture_dir / GROUND_TRUTH)]
    report = evaluate([(r.image_id, r.tokens) for r in results if r.ok], gts)
    return {
        EXPECTED_LATEX: results_to_jsonl(results).encode("utf-8"),
        EXPECTED_REPORT: (json.dumps(report.to_dict(), indent=2) + "\n").encode("utf-8"),
    }


def _first_difference(expected: bytes, actual: bytes) -> str:
    exp_lines, act_lines = expected.splitlines(), actual.splitlines()
    for n, (e, a) in enumerate(zip(exp_lines, act_lines), 1):
        if e != a:
            return f"line {n}: expected {e.decode('utf-8', 'replace')!r}, got {a.decode('utf-8', 'replace')!r}"
    n = min(len(exp_lines), len(act_lines)) + 1
    if len(exp_lines) != len(act_lines):
        return f"line {n}: expected {len(exp_lines)} lines, got {len(act_lines)}"
    return "trailing bytes differ"


def check_fixture(fixture_dir) -> FixtureResult:
    fixture_dir = Path(fixture_dir)
    name = fixture_dir.name
    try:
        outputs = produce(fixture_dir)
    except Exception as exc:  # a broken fixture is a failed check, not a crash of the whole run
        return FixtureResult(name, False, f"pipeline error: {exc}")
    for filename, actual in outputs.items():
        path = fixture_dir / filename
        if not path.is_file():
            return FixtureResult(name, False, f"{filename}: missing (run with --bless to create)")
        expected = path.read_bytes()
        if expected != actual:
            return FixtureResult(name, False, f"{filename}: {_first_difference(expected, actual)}")
    return FixtureResult(name, True)


def fixture_check(root) -> list[FixtureResult]:
    dirs = fixture_dirs(root)
    with ThreadPoolExecutor() as pool:
        return list(pool.map(check_fixture, dirs))


def bless(root) -> list[str]:
    """Overwrite every fixture's expected files with fresh pipeline output."""
    written = []
    for d in fixture_dirs(root):
        for filename, data in produce(d).items():
            (d / filename).write_bytes(data)
            written.append(f"{d.name}/{filename}")
    return written
