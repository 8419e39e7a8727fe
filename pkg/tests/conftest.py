from __future__ import annotations

import random

import pytest

from hmer.detections import SymbolBox


def box(x, y, w, h, label="x", score=1.0) -> SymbolBox:
    return SymbolBox(label, x, y, w, h, score)


def random_box(rng: random.Random, label: str = "x", span: float = 50.0) -> SymbolBox:
    return box(rng.uniform(-span, span), rng.uniform(-span, span), rng.uniform(0.5, 30), rng.uniform(0.5, 30), label)


@pytest.fixture
def rng():
    return random.Random(1234)


_VERDICTS: list[str] = []


@pytest.fixture
def verdict():
    """Print and keep one PASS/FAIL line per acceptance criterion."""

    def record(number: int, ok: bool, detail: str) -> bool:
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(line)
        _VERDICTS.append(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_VERDICTS):
            terminalreporter.write_line(line)
