"""Static SVG debug view: symbol boxes with labels, tree edges as labelled arrows."""

from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape

from .bsrt import Bsrt
from .detections import SymbolBox
from .geometry import center

RELATION_COLORS = {
    "Right": "#1f77b4",
    "Superscript": "#d62728",
    "Subscript": "#2ca02c",
    "Above": "#9467bd",
    "Below": "#8c564b",
    "Inside": "#ff7f0e",
}


def _num(v: float) -> str:
    return f"{v:.2f}".rstrip("0").rstrip(".")


def render_svg(symbols: Sequence[SymbolBox], tree: Bsrt | None = None, margin: float = 20.0) -> str:
    """Draw ``symbols`` (or ``tree.nodes`` when a tree is given) and the tree's edges."""
    boxes = list(tree.nodes) if tree is not None else list(symbols)
    x0 = min(b.x_min for b in boxes) - margin
    y0 = min(b.y_min for b in boxes) - margin
    x1 = max(b.x_max for b in boxes) + margin
    y1 = max(b.y_max for b in boxes) + margin
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_num(x0)} {_num(y0)} {_num(x1 - x0)} {_num(y1 - y0)}" '
        f'width="{_num(x1 - x0)}" height="{_num(y1 - y0)}" style="background: white">',
        "<defs>",
        '<marker id="arrow" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="6" markerHeight="6" orient="auto">'
        '<path d="M 0 0 L 10 5 L 0 10 z" fill="context-stroke"/></marker>',
        "</defs>",
        '<g class="symbols">',
    ]
    for i, b in enumerate(boxes):
        lines.append(
            f'<rect data-id="{i}" x="{_num(b.x_min)}" y="{_num(b.y_min)}" width="{_num(b.width)}" '
            f'height="{_num(b.height)}" fill="none" stroke="#444" stroke-width="1"/>'
        )
        font = max(6.0, min(14.0, b.height * 0.5))
        lines.append(
            f'<text x="{_num(b.x_min + 1)}" y="{_num(b.y_min - 2)}" font-family="monospace" '
            f'font-size="{_num(font)}" fill="#222">{escape(b.label)}</text>'
        )
    lines.append("</g>")
    if tree is not None:
        lines.append('<g class="edges">')
        for e in tree.edges:
            (ax, ay), (bx, by) = center(boxes[e.parent]), center(boxes[e.child])
            color = RELATION_COLORS.get(e.relation.value, "#000")
            lines.append(
                f'<line data-parent="{e.parent}" data-child="{e.child}" x1="{_num(ax)}" y1="{_num(ay)}" '
                f'x2="{_num(bx)}" y2="{_num(by)}" stroke="{color}" stroke-width="1.5" marker-end="url(#arrow)"/>'
            )
            lines.append(
                f'<text x="{_num((ax + bx) / 2)}" y="{_num((ay + by) / 2 - 3)}" font-family="sans-serif" '
                f'font-size="9" fill="{color}">{e.relation.value}</text>'
            )
        lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
