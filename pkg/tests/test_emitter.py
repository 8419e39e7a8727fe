from __future__ import annotations

import random

import pytest

from hmer.bsrt import Bsrt, Edge, build_tree
from hmer.emitter import emit_latex, render_string, tokenize_latex
from hmer.errors import ContractError, TokenizeError
from hmer.relations import RelationLabel
from hmer.synth import layout, random_ast

from conftest import box

R = RelationLabel


def _tree(labels, edges, root=0):
    return Bsrt(tuple(box(3 * i, 0, 2, 2, l) for i, l in enumerate(labels)), tuple(edges), root)


def test_one_node():
    assert emit_latex(_tree(["x"], [])) == ["x"]


def test_superscript():
    assert emit_latex(_tree(["x", "2"], [Edge(0, 1, R.SUPERSCRIPT)])) == ["x", "^", "{", "2", "}"]


def test_fraction_consumes_bar():
    tree = _tree(["-", "1", "2"], [Edge(0, 1, R.ABOVE), Edge(0, 2, R.BELOW)])
    assert emit_latex(tree) == ["\\frac", "{", "1", "}", "{", "2", "}"]


def test_sup_before_sub():
    tree = _tree(["x", "i", "2"], [Edge(0, 1, R.SUBSCRIPT), Edge(0, 2, R.SUPERSCRIPT)])
    assert emit_latex(tree) == ["x", "^", "{", "2", "}", "_", "{", "i", "}"]


def test_half_fraction_is_a_contract_error():
    with pytest.raises(ContractError):
        emit_latex(_tree(["-", "1"], [Edge(0, 1, R.ABOVE)]))


def test_invalid_tree_is_a_contract_error():
    with pytest.raises(ContractError):
        emit_latex(_tree(["x", "y"], []))


def test_tokenize_examples():
    assert tokenize_latex(r"y_{BD} = -\frac{4}{3}X + b") == [
        "y", "_", "{", "B", "D", "}", "=", "-", "\\frac", "{", "4", "}", "{", "3", "}", "X", "+", "b"]
    assert tokenize_latex("x^2") == ["x", "^", "{", "2", "}"]
    assert tokenize_latex("") == []


def test_tokenize_normalizations():
    assert tokenize_latex(r"\left( a \right)") == ["(", "a", ")"]
    assert tokenize_latex(r"\left. a \right|") == ["a", "|"]
    assert tokenize_latex(r"\dfrac{1}{2}") == tokenize_latex(r"\frac{1}{2}")
    assert tokenize_latex(r"a\,b\quad c") == ["a", "b", "c"]
    assert tokenize_latex(r"x^\alpha") == ["x", "^", "{", "\\alpha", "}"]
    assert tokenize_latex(r"\leq\le") == ["\\le", "\\le"]


@pytest.mark.parametrize("text,pos", [("{a", 0), ("a}", 1), (r"\foo", 0), ("x^", 1)])
def test_tokenize_errors_carry_position(text, pos):
    with pytest.raises(TokenizeError) as info:
        tokenize_latex(text)
    assert info.value.position == pos


def test_unknown_command_is_named():
    with pytest.raises(TokenizeError, match=r"\\foo"):
        tokenize_latex(r"a + \foo")


def test_render_string_separates_letter_commands():
    assert render_string(["\\alpha", "x"]) == "\\alpha x"
    assert render_string(["\\alpha", "2"]) == "\\alpha2"


def test_emit_tokenize_fixpoint():
    rng = random.Random(3)
    for _ in range(200):
        seed = rng.getrandbits(32)
        tokens = emit_latex(build_tree(layout(random_ast(seed, 3))))
        assert tokenize_latex(render_string(tokens)) == tokens
