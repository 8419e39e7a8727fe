from __future__ import annotations

import pytest

from hmer.bsrt import build_tree
from hmer.emitter import emit_latex
from hmer.errors import LayoutError, TokenizeError
from hmer.geometry import overlap_ratios
from hmer.synth import (
    Frac,
    LayoutParams,
    Row,
    Scripted,
    Sqrt,
    Symbol,
    ast_from_tokens,
    depth,
    latex_of_ast,
    layout,
    random_ast,
    validate_ast,
)


def test_latex_of_ast_examples():
    assert latex_of_ast(Symbol("x")) == ["x"]
    assert latex_of_ast(Scripted(Symbol("x"), sup=Row((Symbol("2"),)))) == ["x", "^", "{", "2", "}"]
    assert latex_of_ast(Frac(Row((Symbol("1"),)), Row((Symbol("2"),)))) == ["\\frac", "{", "1", "}", "{", "2", "}"]


def test_depth():
    assert depth(Row((Symbol("x"), Symbol("y")))) == 1
    assert depth(Sqrt(Row((Frac(Row((Symbol("1"),)), Row((Symbol("2"),))),)))) == 3


def test_depth_one_is_flat():
    for seed in range(50):
        ast = random_ast(seed, 1)
        assert all(isinstance(c, Symbol) for c in ast.children)


def test_random_ast_deterministic_and_valid():
    assert random_ast(42, 3) == random_ast(42, 3)
    for seed in range(1000):
        ast = random_ast(seed, 3)
        validate_ast(ast)
        assert depth(ast) <= 3


def test_ast_from_tokens_inverts_printer():
    for seed in range(300):
        ast = random_ast(seed, 3)
        assert ast_from_tokens(latex_of_ast(ast)) == ast


@pytest.mark.parametrize("tokens", [
    ["^", "{", "2", "}"],
    ["x", "^", "{", "1", "}", "^", "{", "2", "}"],
    ["\\frac", "{", "1", "}"],
    ["x", "}"],
    ["{", "}"],
])
def test_ast_from_tokens_rejects(tokens):
    with pytest.raises(TokenizeError):
        ast_from_tokens(tokens)


def test_single_symbol_layout():
    [b] = layout(Symbol("x"))
    assert b.label == "x"


def test_fraction_layout_is_centered():
    boxes = layout(Frac(Row((Symbol("1"),)), Row((Symbol("2"),))))
    bar = next(b for b in boxes if b.label == "-")
    one = next(b for b in boxes if b.label == "1")
    two = next(b for b in boxes if b.label == "2")
    assert one.y_max < bar.y_min and two.y_min > bar.y_max
    assert overlap_ratios(bar, one)[1] == pytest.approx(one.width / bar.width)
    assert overlap_ratios(one, bar)[1] == 1
    assert one.x_min + one.width / 2 == pytest.approx(bar.x_min + bar.width / 2)


def test_sqrt_layout_contains_radicand():
    boxes = layout(Sqrt(Row((Symbol("x"), Symbol("y")))))
    root = next(b for b in boxes if b.label == "\\sqrt")
    for b in boxes:
        if b is not root:
            assert root.x_min < b.x_min and b.x_max < root.x_max
            assert root.y_min < b.y_min and b.y_max < root.y_max


def test_layout_deterministic_under_jitter():
    ast = random_ast(11, 3)
    params = LayoutParams(jitter=0.05, seed=3)
    assert layout(ast, params) == layout(ast, params)
    assert layout(ast, params) != layout(ast, LayoutParams(jitter=0.05, seed=4))


@pytest.mark.parametrize("kw", [{"jitter": 0.5}, {"jitter": -0.1}, {"glyph_size": 0}, {"script_scale": 1}])
def test_layout_params_invariants(kw):
    with pytest.raises(LayoutError):
        LayoutParams(**kw)


def test_too_deep_for_glyph_size():
    ast = Row((Symbol("x"),))
    for _ in range(6):
        ast = Row((Scripted(Symbol("x"), sup=ast),))
    with pytest.raises(LayoutError):
        layout(ast, LayoutParams(glyph_size=20))


def test_round_trip_sample():
    for seed in range(200):
        ast = random_ast(seed, 3)
        assert emit_latex(build_tree(layout(ast))) == latex_of_ast(ast)
