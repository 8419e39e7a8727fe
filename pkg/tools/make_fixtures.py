"""Regenerate the fixture inputs (detections.json, gt.tsv) under fixtures/.

Expected outputs are not touched; refresh them with ``hmer check-fixtures --bless``.
"""

from __future__ import annotations

import sys
from pathlib import Path

from hmer.detections import Expression, SymbolBox, dump_detections_json
from hmer.emitter import tokenize_latex
from hmer.synth import LayoutParams, ast_from_tokens, layout

ROOT = Path(__file__).resolve().parent.parent / "fixtures"

# (image id, latex laid out as detections, ground-truth latex)
LINE_FIXTURES = {
    "figure4_line1": [("line1", r"AB = \sqrt{AO^2 + BO^2} = 2\sqrt{5}", r"AB = \sqrt{AO^2 + BO^2} = 2\sqrt{5}")],
    "figure4_line2": [("line2", r"y - \frac{y-1}{2} = 2 - \frac{y+3}{5}", r"y - \frac{y-1}{2} = 2 - \frac{y+3}{5}")],
    "figure4_line3": [("line3", r"y_{BD} = -\frac{4}{3}X + b", r"y_{BD} = -\frac{4}{3}X + b")],
    "figure4_line4": [("line4", r"10\sqrt{10x-x^2} = 14", r"10\sqrt{10x-x^2} = 14")],
    "figure4_line5": [("line5", r"3 - \frac{x-1}{2} = 3x-1", r"3 - \frac{x-1}{2} = 3x-1")],
    # detections drawn from the weaker recognizer's strings, scored against the stronger one's
    "figure5_comparison": [
        ("cmp1", r"\sqrt{a^2-3x} = 2", r"\sqrt{x^2-3x} = 2"),
        ("cmp2", r"10\sqrt{10x+x^2} = 14", r"10\sqrt{10x-x^2} = 14"),
        ("cmp3", r"y = \frac{1}{3}x^2 + \frac{1}{3}x + 10", r"y = -\frac{1}{3}x^2 + \frac{1}{3}x + 10"),
        ("cmp4", r"y = \frac{1}{2}x - J", r"y = \frac{1}{2}x - 3"),
    ],
    # 6 exact, 2 at distance 1, 1 at distance 2, 1 at distance 5
    "crafted_eval": [
        ("e01", r"x+1", r"x+1"),
        ("e02", r"a=b", r"a=b"),
        ("e03", r"\frac{1}{2}", r"\frac{1}{2}"),
        ("e04", r"\sqrt{y}", r"\sqrt{y}"),
        ("e05", r"x^{2}+y^{2}", r"x^{2}+y^{2}"),
        ("e06", r"3-\frac{x-1}{2}", r"3-\frac{x-1}{2}"),
        ("e07", r"x+2", r"x+1"),
        ("e08", r"ab", r"abc"),
        ("e09", r"y=2x", r"y=3z"),
        ("e10", r"a", r"b+c+d"),
    ],
    "single_symbol": [("one", r"x", r"x")],
}

JITTER = 0.03


def laid_out(image_id: str, latex: str, seed: int, jitter: float = JITTER) -> Expression:
    ast = ast_from_tokens(tokenize_latex(latex))
    return Expression(image_id, tuple(layout(ast, LayoutParams(jitter=jitter, seed=seed))))


def write_fixture(name: str, expressions: list[Expression], gt: list[tuple[str, str]]) -> None:
    d = ROOT / name
    d.mkdir(parents=True, exist_ok=True)
    dump_detections_json(expressions, d / "detections.json")
    (d / "gt.tsv").write_text("".join(f"{i}\t{s}\n" for i, s in gt), encoding="utf-8")


def main() -> int:
    for name, rows in LINE_FIXTURES.items():
        jitter = 0.0 if name == "crafted_eval" else JITTER
        exprs = [laid_out(i, pred, seed, jitter) for seed, (i, pred, _) in enumerate(rows)]
        write_fixture(name, exprs, [(i, gt) for i, _, gt in rows])
    # the second expression's lone glyph sits far below and just right of its neighbour, so no rule attaches it
    ok = laid_out("fine", r"x+1", 0, 0.0)
    orphan = Expression("stray", (SymbolBox("x", 20, 20, 40, 40), SymbolBox("y", 40, 320, 40, 40)))
    write_fixture("orphan", [ok, orphan], [("fine", "x+1"), ("stray", "xy")])
    print(f"wrote fixture inputs under {ROOT}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
