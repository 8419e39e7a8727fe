from __future__ import annotations

import pytest

from hmer.bsrt import Bsrt, Edge, build_tree, orphan_check, reading_order, validate_tree
from hmer.emitter import emit_latex
from hmer.errors import StructureError
from hmer.relations import RelationLabel

from conftest import box

R = RelationLabel


def _edges(tree):
    return {(tree.nodes[e.parent].label, tree.nodes[e.child].label, e.relation) for e in tree.edges}


def test_reading_order():
    a, b, c = box(5, 0, 1, 1, "a"), box(1, 0, 1, 1, "b"), box(3, 0, 1, 1, "c")
    assert reading_order([a, b, c]) == [b, c, a]
    low, high = box(0, 7, 1, 1, "l"), box(0, 2, 1, 1, "h")
    assert reading_order([low, high]) == [high, low]
    assert reading_order([a]) == [a]


def test_single_symbol():
    tree = build_tree([box(0, 0, 10, 14, "x")])
    assert tree.nodes[tree.root].label == "x" and tree.edges == ()


def test_superscript_pair():
    tree = build_tree([box(0, 0, 10, 14, "x"), box(11, -6, 6, 7, "2")])
    assert tree.nodes[tree.root].label == "x"
    assert _edges(tree) == {("x", "2", R.SUPERSCRIPT)}


def test_fraction():
    tree = build_tree([box(0, 10, 20, 2, "-"), box(7, 0, 6, 8, "1"), box(7, 14, 6, 8, "2")])
    assert tree.nodes[tree.root].label == "-"
    assert _edges(tree) == {("-", "1", R.ABOVE), ("-", "2", R.BELOW)}


def test_minus_is_not_a_fraction():
    tree = build_tree([box(0, 0, 10, 14, "x"), box(14, 6, 10, 2, "-"), box(28, 0, 10, 14, "y")])
    assert emit_latex(tree) == ["x", "-", "y"]


def test_radical_contents_are_inside():
    root = box(0, 0, 60, 30, "\\sqrt")
    tree = build_tree([root, box(25, 8, 12, 16, "x"), box(40, 8, 12, 16, "y")])
    assert emit_latex(tree) == ["\\sqrt", "{", "x", "y", "}"]


def test_orphan_is_reported():
    with pytest.raises(StructureError) as info:
        build_tree([box(20, 20, 40, 40, "x"), box(40, 320, 40, 40, "y")])
    assert info.value.orphans == (1,)


def test_empty_input():
    with pytest.raises(StructureError):
        build_tree([])


def test_orphan_check():
    nodes = (box(0, 0, 1, 1), box(2, 0, 1, 1), box(4, 0, 1, 1))
    full = Bsrt(nodes, (Edge(0, 1, R.RIGHT), Edge(1, 2, R.RIGHT)), 0)
    orphan_check(full, 3)
    with pytest.raises(StructureError):
        orphan_check(Bsrt(nodes[:2], (Edge(0, 1, R.RIGHT),), 0), 3)
    orphan_check(Bsrt(nodes[:1], (), 0), 1)


@pytest.mark.parametrize("edges,root", [
    ((Edge(0, 1, R.RIGHT), Edge(1, 0, R.RIGHT)), 0),  # cycle, root has a parent
    ((Edge(0, 1, R.RIGHT), Edge(0, 1, R.ABOVE)), 0),  # two parents
    ((Edge(0, 1, R.UNRELATED),), 0),
    ((Edge(0, 5, R.RIGHT),), 0),
    ((), 0),  # node 1 unreachable
])
def test_validate_tree_rejects(edges, root):
    nodes = (box(0, 0, 1, 1), box(2, 0, 1, 1))
    with pytest.raises(StructureError):
        validate_tree(Bsrt(nodes, edges, root))


def test_tree_dict_round_trip():
    tree = build_tree([box(0, 10, 20, 2, "-"), box(7, 0, 6, 8, "1"), box(7, 14, 6, 8, "2")])
    assert Bsrt.from_dict(tree.to_dict()) == tree


def test_build_tree_is_order_independent():
    boxes = [box(0, 0, 10, 14, "x"), box(11, -6, 6, 7, "2"), box(20, 0, 10, 14, "y")]
    assert build_tree(boxes) == build_tree(boxes[::-1])
