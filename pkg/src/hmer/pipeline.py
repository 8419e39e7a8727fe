"""Detections in, JSON-lines results out: the batch path shared by the CLI and fixture checks."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .bsrt import Bsrt, build_tree
from .detections import Expression, deduplicate
from .emitter import emit_latex, render_string
from .errors import StructureError
from .relations import RuleConfig

EMIT_MODES = ("latex", "tree", "both")


@dataclass(frozen=True)
class ParseResult:
    image_id: str
    tokens: tuple[str, ...] | None = None
    tree: Bsrt | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None

    def to_json(self, emit: str = "latex") -> str:
        obj: dict = {"image_id": self.image_id}
        if emit in ("latex", "both"):
            obj["latex"] = render_string(self.tokens)
            obj["tokens"] = list(self.tokens)
        if emit in ("tree", "both"):
            obj["tree"] = self.tree.to_dict()
        return json.dumps(obj, ensure_ascii=False)


def parse_expression(expr: Expression, config: RuleConfig | None = None) -> ParseResult:
    symbols = deduplicate(expr.symbols)
    try:
        tree = build_tree(symbols, config)
    except StructureError as exc:
        return ParseResult(expr.image_id, error=str(exc))
    return ParseResult(expr.image_id, tuple(emit_latex(tree)), tree)


def parse_batch(expressions: Sequence[Expression], config: RuleConfig | None = None) -> list[ParseResult]:
    """Results in input order; structural failures are reported, not raised."""
    return [parse_expression(e, config) for e in expressions]


def results_to_jsonl(results: Sequence[ParseResult], emit: str = "latex") -> str:
    if emit not in EMIT_MODES:
        raise ValueError(f"emit must be one of {EMIT_MODES}")
    return "".join(r.to_json(emit) + "\n" for r in results if r.ok)
