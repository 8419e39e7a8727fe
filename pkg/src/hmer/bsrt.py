"""Baseline symbol relationship tree construction.

Symbols are canonicalised into reading order, then three passes run on every
group of symbols, recursively:

1. containment: symbols inside a container glyph (``\\sqrt``) are set aside
   and parsed as that container's Inside group;
2. fractions: a ``-`` with stacked material both above and below becomes a
   fraction bar, claiming numerator and denominator groups;
3. baseline: the remaining units are chained left to right with ``classify``,
   diverting script material into Superscript/Subscript groups until the
   vertical center returns to the baseline symbol.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .detections import BAR, SymbolBox
from .errors import StructureError
from .geometry import center, interval_overlap
from .relations import RelationLabel, RuleConfig, classify, containment, default_config

R = RelationLabel
SCRIPT_RELATIONS = (R.SUPERSCRIPT, R.SUBSCRIPT)


@dataclass(frozen=True)
class Edge:
    parent: int
    child: int
    relation: RelationLabel


@dataclass(frozen=True)
class Bsrt:
    """Rooted tree over symbols; node ids index into ``nodes``."""

    nodes: tuple[SymbolBox, ...]
    edges: tuple[Edge, ...]
    root: int

    def children(self, node: int) -> dict[RelationLabel, list[int]]:
        slots: dict[RelationLabel, list[int]] = {}
        for e in self.edges:
            if e.parent == node:
                slots.setdefault(e.relation, []).append(e.child)
        for kids in slots.values():
            kids.sort(key=lambda k: (self.nodes[k].x_min, k))
        return slots

    def to_dict(self) -> dict:
        return {
            "root": self.root,
            "nodes": [dict(id=i, **box.to_dict()) for i, box in enumerate(self.nodes)],
            "edges": [{"parent": e.parent, "child": e.child, "relation": e.relation.value} for e in self.edges],
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "Bsrt":
        raw_nodes = sorted(obj["nodes"], key=lambda n: n["id"])
        if [n["id"] for n in raw_nodes] != list(range(len(raw_nodes))):
            raise StructureError("node ids must be 0..n-1")
        nodes = tuple(SymbolBox(**{k: v for k, v in n.items() if k != "id"}) for n in raw_nodes)
        edges = tuple(Edge(e["parent"], e["child"], RelationLabel(e["relation"])) for e in obj["edges"])
        return cls(nodes, edges, obj["root"])


def reading_order(symbols: Iterable[SymbolBox]) -> list[SymbolBox]:
    """Left to right, then top to bottom, then by label."""
    return sorted(symbols, key=lambda s: (s.x_min, s.y_min, s.label, s.width, s.height, s.score))


def validate_tree(tree: Bsrt) -> None:
    """Raise StructureError unless ``tree`` is a single rooted tree with labelled edges."""
    n = len(tree.nodes)
    if not 0 <= tree.root < n:
        raise StructureError(f"root {tree.root} out of range")
    parent: dict[int, int] = {}
    for e in tree.edges:
        if e.relation is R.UNRELATED:
            raise StructureError(f"edge {e.parent}->{e.child} labelled Unrelated")
        if not (0 <= e.parent < n and 0 <= e.child < n):
            raise StructureError(f"edge {e.parent}->{e.child} references a missing node")
        if e.child in parent:
            raise StructureError(f"node {e.child} has two parents")
        parent[e.child] = e.parent
    if tree.root in parent:
        raise StructureError("root has a parent")
    seen = {tree.root}
    stack = [tree.root]
    kids: dict[int, list[int]] = {}
    for e in tree.edges:
        kids.setdefault(e.parent, []).append(e.child)
    while stack:
        for k in kids.get(stack.pop(), ()):
            if k in seen:
                raise StructureError(f"cycle through node {k}")
            seen.add(k)
            stack.append(k)
    missing = sorted(set(range(n)) - seen)
    if missing:
        raise StructureError("tree is not connected", missing)


def orphan_check(tree: Bsrt, n_symbols: int) -> None:
    if len(tree.nodes) != n_symbols:
        raise StructureError(f"tree has {len(tree.nodes)} nodes for {n_symbols} symbols")
    validate_tree(tree)


def union_box(boxes: Sequence[SymbolBox], label: str = "") -> SymbolBox:
    x0 = min(b.x_min for b in boxes)
    y0 = min(b.y_min for b in boxes)
    x1 = max(b.x_max for b in boxes)
    y1 = max(b.y_max for b in boxes)
    return SymbolBox(label, x0, y0, x1 - x0, y1 - y0)


def _band_box(like: SymbolBox, x0: float, x1: float, cy: float, height: float) -> SymbolBox:
    return SymbolBox(like.label, x0, cy - height / 2, x1 - x0, height, like.score)


@dataclass
class _Unit:
    """A baseline-level item: a glyph, a whole fraction or a container with its contents.

    ``body`` is the box used for relation tests. For fractions and containers it
    spans the unit horizontally and sits on the unit's own axis vertically, so a
    tall stack relates to its neighbours like an ordinary glyph.
    """

    anchor: int
    members: list[int]
    extent: SymbolBox
    body: SymbolBox
    has_scripts: bool = field(default=False)


class _Builder:
    def __init__(self, boxes: list[SymbolBox], config: RuleConfig):
        self.boxes = boxes
        self.config = config
        self.edges: list[Edge] = []
        self.orphans: list[int] = []
        self.container_parent = self._container_parents()
        self.contents: dict[int, list[int]] = {}
        for i, p in enumerate(self.container_parent):
            if p is not None:
                self.contents.setdefault(p, []).append(i)

    # -- containment -----------------------------------------------------

    def _container_parents(self) -> list[int | None]:
        boxes, cfg = self.boxes, self.config
        containers = [i for i, b in enumerate(boxes) if b.label in cfg.container_labels]
        parents: list[int | None] = []
        for i, b in enumerate(boxes):
            # strictly larger area keeps the parent relation acyclic
            holders = [
                c for c in containers
                if c != i and boxes[c].area > b.area and containment(boxes[c], b) >= cfg.inside_threshold
            ]
            parents.append(min(holders, key=lambda c: (boxes[c].area, c)) if holders else None)
        return parents

    def _with_descendants(self, ids: Iterable[int]) -> list[int]:
        out = []
        stack = list(ids)
        while stack:
            i = stack.pop()
            out.append(i)
            stack.extend(self.contents.get(i, ()))
        return sorted(out)

    # -- helpers ---------------------------------------------------------

    def _is_ordinary(self, i: int) -> bool:
        label = self.boxes[i].label
        return label != BAR and label not in self.config.container_labels

    def _typical_height(self, ids: Iterable[int]) -> float | None:
        heights = [self.boxes[i].height for i in ids if self._is_ordinary(i)]
        return statistics.median(heights) if heights else None

    def _edge(self, parent: int, child: int, relation: RelationLabel) -> None:
        self.edges.append(Edge(parent, child, relation))

    # -- fraction pass ---------------------------------------------------

    def _stack(self, bar_id: int, pool: list[int], above: bool) -> list[int]:
        """Symbols stacked contiguously on one side of the bar and overlapping it horizontally."""
        bar = self.boxes[bar_id]
        cy = bar.y_min + bar.height / 2
        cands = []
        for i in pool:
            b = self.boxes[i]
            if interval_overlap(bar.x_min, bar.x_max, b.x_min, b.x_max) <= 0:
                continue
            if (b.y_max <= cy) if above else (b.y_min >= cy):
                cands.append(i)
        if not cands:
            return []
        if above:
            cands.sort(key=lambda i: (-self.boxes[i].y_max, i))
        else:
            cands.sort(key=lambda i: (self.boxes[i].y_min, i))
        # a numerator may open with small script glyphs, so the gap allowance follows the tallest glyph
        ordinary = [self.boxes[i].height for i in cands if self._is_ordinary(i)]
        max_gap = 0.5 * max(ordinary or [self.boxes[i].height for i in cands])
        frontier = bar.y_min if above else bar.y_max
        chosen = []
        for i in cands:
            b = self.boxes[i]
            gap = frontier - b.y_max if above else b.y_min - frontier
            if gap > max_gap:
                break
            chosen.append(i)
            frontier = min(frontier, b.y_min) if above else max(frontier, b.y_max)
        return chosen

    def _stacked(self, bar: SymbolBox, region: SymbolBox, above: bool) -> bool:
        # tested both ways round: mu is relative to the first box, and either the
        # bar or its numerator may be the wider one
        near, far = (R.ABOVE, R.BELOW) if above else (R.BELOW, R.ABOVE)
        return classify(bar, region, self.config) is near or classify(region, bar, self.config) is far

    def _fractions(self, top: list[int]) -> tuple[dict[int, tuple[list[int], list[int]]], set[int]]:
        bars = sorted((i for i in top if self.boxes[i].label == BAR), key=lambda i: (-self.boxes[i].width, i))
        claimed: set[int] = set()
        fractions = {}
        for b in bars:
            if b in claimed:
                continue
            pool = [i for i in top if i != b and i not in claimed]
            num = self._stack(b, pool, above=True)
            den = self._stack(b, pool, above=False)
            if not num or not den:
                continue
            bar = self.boxes[b]
            num_box = union_box([self.boxes[i] for i in num])
            den_box = union_box([self.boxes[i] for i in den])
            if self._stacked(bar, num_box, True) and self._stacked(bar, den_box, False):
                fractions[b] = (num, den)
                claimed.update(num, den, [b])
        return fractions, claimed

    # -- groups ----------------------------------------------------------

    def parse_group(self, members: list[int]) -> _Unit:
        member_set = set(members)
        top = [i for i in members if self.container_parent[i] not in member_set]
        ref_height = self._typical_height(members)
        fractions, claimed = self._fractions(top)

        units = []
        for i in top:
            if i in fractions:
                units.append(self._fraction_unit(i, *fractions[i], ref_height))
            elif i not in claimed:
                units.append(self._symbol_unit(i, ref_height))
        units.sort(key=lambda u: (u.extent.x_min, u.extent.y_min, u.anchor))
        return self._baseline(units)

    def _symbol_unit(self, i: int, ref_height: float | None) -> _Unit:
        box = self.boxes[i]
        inside = self.contents.get(i)
        if inside:
            members = self._with_descendants(inside)
            root = self.parse_group(members)
            self._edge(i, root.anchor, R.INSIDE)
            body = SymbolBox(box.label, box.x_min, root.body.y_min, box.width, root.body.height, box.score)
            extent = union_box([box] + [self.boxes[k] for k in members])
            return _Unit(i, [i] + members, extent, body)
        body = box
        if ref_height is not None and box.height < 0.5 * ref_height:
            # flat glyphs such as a minus sign sit on the axis with little height
            body = _band_box(box, box.x_min, box.x_max, box.y_min + box.height / 2, ref_height)
        return _Unit(i, [i], box, body)

    def _fraction_unit(self, bar_id: int, num: list[int], den: list[int], ref_height: float | None) -> _Unit:
        num_members = self._with_descendants(num)
        den_members = self._with_descendants(den)
        num_root = self.parse_group(num_members)
        den_root = self.parse_group(den_members)
        self._edge(bar_id, num_root.anchor, R.ABOVE)
        self._edge(bar_id, den_root.anchor, R.BELOW)
        bar = self.boxes[bar_id]
        members = [bar_id] + num_members + den_members
        extent = union_box([self.boxes[k] for k in members])
        height = self._typical_height(num_members + den_members) or ref_height or bar.height
        body = _band_box(bar, extent.x_min, extent.x_max, bar.y_min + bar.height / 2, height)
        return _Unit(bar_id, members, extent, body)

    # -- baseline pass ---------------------------------------------------

    def _baseline(self, units: list[_Unit]) -> _Unit:
        root = cur = units[0]
        i = 1
        while i < len(units):
            u = units[i]
            rel = classify(cur.body, u.body, self.config)
            if rel is R.RIGHT:
                self._edge(cur.anchor, u.anchor, R.RIGHT)
                cur = u
                i += 1
            elif rel in SCRIPT_RELATIONS and not cur.has_scripts:
                i = self._script_region(cur, units, i, rel)
                cur.has_scripts = True
            else:
                self.orphans.extend(u.members)
                i += 1
        return root

    def _script_region(self, base: _Unit, units: list[_Unit], start: int, first: RelationLabel) -> int:
        """Collect units into base's script slots until one returns to base's vertical band."""
        _, base_cy = center(base.body)
        band = self.config.script_return_band * base.body.height
        slots: dict[RelationLabel, list[_Unit]] = {first: [units[start]]}
        j = start + 1
        while j < len(units):
            _, cy = center(units[j].body)
            if abs(cy - base_cy) <= band:
                break
            slots.setdefault(R.SUPERSCRIPT if cy < base_cy else R.SUBSCRIPT, []).append(units[j])
            j += 1
        for rel in SCRIPT_RELATIONS:
            if rel in slots:
                script_root = self._baseline(slots[rel])
                self._edge(base.anchor, script_root.anchor, rel)
        return j


def build_tree(symbols: Sequence[SymbolBox], config: RuleConfig | None = None) -> Bsrt:
    """Build the relationship tree; raises StructureError if any symbol cannot be attached."""
    if not symbols:
        raise StructureError("no symbols")
    boxes = reading_order(symbols)
    builder = _Builder(boxes, config or default_config())
    root = builder.parse_group(list(range(len(boxes))))
    if builder.orphans:
        raise StructureError("symbols unrelated to every candidate parent", sorted(builder.orphans))
    tree = Bsrt(tuple(boxes), tuple(sorted(builder.edges, key=lambda e: (e.parent, e.child))), root.anchor)
    orphan_check(tree, len(symbols))
    return tree
