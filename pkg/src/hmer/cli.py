"""``hmer`` command line: parse, eval, synth, render, binarize, check-fixtures."""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from pathlib import Path

from . import fixtures
from .bsrt import Bsrt
from .detections import DEFAULT_VOCABULARY, Expression, dump_detections_json, load_detections_json, load_vocabulary
from .emitter import render_string, tokenize_latex
from .errors import HmerError
from .metrics import evaluate, format_table, load_ground_truth, load_predictions
from .pipeline import EMIT_MODES, parse_batch, results_to_jsonl
from .preprocess import binarize, otsu_threshold, read_pgm, write_pgm
from .relations import default_config, load_config
from .render import render_svg
from .synth import LayoutParams, latex_of_ast, layout, random_ast

EXIT_OK, EXIT_INPUT, EXIT_PARTIAL = 0, 1, 2

log = logging.getLogger("hmer")


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _vocab(args):
    return load_vocabulary(args.vocab) if args.vocab else DEFAULT_VOCABULARY


def cmd_parse(args) -> int:
    config = load_config(args.rules) if args.rules else default_config()
    expressions = load_detections_json(args.detections, _vocab(args))
    results = parse_batch(expressions, config)
    _write_text(args.out, results_to_jsonl(results, args.emit))
    failed = [r for r in results if not r.ok]
    for r in failed:
        print(f"hmer parse: {r.image_id}: {r.error}", file=sys.stderr)
    log.info("parsed %d expressions, %d structural failures", len(results), len(failed))
    return EXIT_PARTIAL if failed else EXIT_OK


def cmd_eval(args) -> int:
    gts = [(i, tokenize_latex(s)) for i, s in load_ground_truth(args.gt)]
    report = evaluate(load_predictions(args.predictions), gts)
    sys.stdout.write(format_table(report, paper_baseline=args.paper_baseline))
    if args.out:
        Path(args.out).write_text(json.dumps(report.to_dict(), indent=2) + "\n", encoding="utf-8")
    return EXIT_OK


def cmd_synth(args) -> int:
    if args.count < 0:
        raise HmerError("--count must be non-negative")
    vocab = _vocab(args)
    # validates jitter before any file is touched
    LayoutParams(jitter=args.jitter)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    seeds = random.Random(args.seed)
    expressions, gt_lines = [], []
    for n in range(args.count):
        image_id = f"synth_{args.seed}_{n:05d}"
        ast = random_ast(seeds.getrandbits(32), args.depth, vocab)
        boxes = layout(ast, LayoutParams(jitter=args.jitter, seed=seeds.getrandbits(32)))
        expressions.append(Expression(image_id, tuple(boxes)))
        gt_lines.append(f"{image_id}\t{render_string(latex_of_ast(ast))}\n")
    dump_detections_json(expressions, out / "detections.json")
    (out / "gt.tsv").write_text("".join(gt_lines), encoding="utf-8")
    log.info("wrote %d expressions to %s", args.count, out)
    return EXIT_OK


def _load_tree(path, image_id: str) -> Bsrt:
    text = Path(path).read_text(encoding="utf-8")
    try:
        obj = json.loads(text)
        candidates = [obj]
    except json.JSONDecodeError:
        candidates = [json.loads(line) for line in text.splitlines() if line.strip()]
    for c in candidates:
        if "tree" in c and c.get("image_id", image_id) == image_id:
            return Bsrt.from_dict(c["tree"])
        if "nodes" in c and "edges" in c:
            return Bsrt.from_dict(c)
    raise HmerError(f"{path}: no tree for image {image_id!r}")


def cmd_render(args) -> int:
    expressions = load_detections_json(args.detections, _vocab(args))
    if args.image_id is None:
        expr = expressions[0]
    else:
        matches = [e for e in expressions if e.image_id == args.image_id]
        if not matches:
            raise HmerError(f"no expression {args.image_id!r} in {args.detections}")
        expr = matches[0]
    tree = _load_tree(args.tree, expr.image_id) if args.tree else None
    _write_text(args.out, render_svg(expr.symbols, tree))
    return EXIT_OK


def cmd_binarize(args) -> int:
    img = read_pgm(args.input)
    t = otsu_threshold(img)
    log.info("otsu threshold %d", t)
    write_pgm(binarize(img, t), args.out)
    return EXIT_OK


def cmd_check_fixtures(args) -> int:
    if args.bless:
        for name in fixtures.bless(args.dir):
            print(f"blessed {name}")
        return EXIT_OK
    results = fixtures.fixture_check(args.dir)
    for r in results:
        print(f"{'PASS' if r.ok else 'FAIL'} {r.name}" + (f": {r.message}" if r.message else ""))
    return EXIT_OK if all(r.ok for r in results) else EXIT_INPUT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hmer", description="Structural analysis of detected math symbols.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="detections JSON -> JSON-lines LaTeX and/or trees")
    p.add_argument("detections")
    p.add_argument("--rules", help="rule-table JSON (default: built-in table)")
    p.add_argument("--emit", choices=EMIT_MODES, default="latex")
    p.add_argument("--vocab", help="label map JSON")
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("eval", help="score predictions against a ground-truth TSV")
    p.add_argument("predictions", help="JSON lines from 'hmer parse'")
    p.add_argument("gt", help="TSV of image_id<TAB>latex")
    p.add_argument("--out", help="write the report as JSON")
    p.add_argument("--paper-baseline", action="store_true", help="append the published reference row")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("synth", help="write a synthetic detections.json + gt.tsv pair")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--jitter", type=float, default=0.0)
    p.add_argument("--vocab", help="label map JSON")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("render", help="SVG of one expression's boxes and, optionally, its tree")
    p.add_argument("detections")
    p.add_argument("--tree", help="tree JSON, or JSON lines from 'hmer parse --emit tree'")
    p.add_argument("--image-id", help="expression to draw (default: the first)")
    p.add_argument("--vocab", help="label map JSON")
    p.add_argument("--out", help="SVG path (default: stdout)")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("binarize", help="Otsu-binarize a binary PGM")
    p.add_argument("input")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_binarize)

    p = sub.add_parser("check-fixtures", help="rerun the pipeline on golden fixtures")
    p.add_argument("--dir", default="fixtures")
    p.add_argument("--bless", action="store_true", help="rewrite expected outputs from the current pipeline")
    p.set_defaults(func=cmd_check_fixtures)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except (HmerError, ValueError, OSError, KeyError) as exc:
        print(f"hmer {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
