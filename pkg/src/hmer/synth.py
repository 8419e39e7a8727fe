"""Synthetic expression trees and their symbol layouts.

The layouts are built to land inside the default rule bands with margin to
spare, so parsing a layout and emitting LaTeX must reproduce the tree's own
LaTeX exactly. This makes the generator an end-to-end oracle for the parser.

Layout works in a frame whose y axis points down and whose y=0 line is the
math axis of the item being placed (the line fraction bars sit on).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence, Union

from .detections import BAR, DEFAULT_VOCABULARY, SQRT, STRUCTURAL_TOKENS, SymbolBox, Vocabulary
from .errors import LayoutError, TokenizeError

FRAC = "\\frac"


@dataclass(frozen=True)
class Symbol:
    token: str


@dataclass(frozen=True)
class Row:
    children: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))


@dataclass(frozen=True)
class Frac:
    numerator: "ExprAst"
    denominator: "ExprAst"


@dataclass(frozen=True)
class Sqrt:
    radicand: "ExprAst"


@dataclass(frozen=True)
class Scripted:
    base: Symbol
    sup: "ExprAst | None" = None
    sub: "ExprAst | None" = None


ExprAst = Union[Symbol, Row, Frac, Sqrt, Scripted]


def validate_ast(ast: ExprAst) -> None:
    if isinstance(ast, Symbol):
        if not ast.token or ast.token in ("{", "}", "^", "_"):
            raise ValueError(f"bad leaf token {ast.token!r}")
    elif isinstance(ast, Row):
        if not ast.children:
            raise ValueError("empty Row")
        for c in ast.children:
            validate_ast(c)
    elif isinstance(ast, Frac):
        validate_ast(ast.numerator)
        validate_ast(ast.denominator)
    elif isinstance(ast, Sqrt):
        validate_ast(ast.radicand)
    elif isinstance(ast, Scripted):
        if not isinstance(ast.base, Symbol):
            raise ValueError("script base must be a single symbol")
        if ast.sup is None and ast.sub is None:
            raise ValueError("Scripted without scripts")
        validate_ast(ast.base)
        for s in (ast.sup, ast.sub):
            if s is not None:
                validate_ast(s)
    else:
        raise ValueError(f"not an AST node: {ast!r}")


def depth(ast: ExprAst) -> int:
    """Nesting depth; a Row of plain symbols has depth 1."""
    if isinstance(ast, Symbol):
        return 1
    if isinstance(ast, Row):
        return max(depth(c) for c in ast.children)
    if isinstance(ast, Frac):
        return 1 + max(depth(ast.numerator), depth(ast.denominator))
    if isinstance(ast, Sqrt):
        return 1 + depth(ast.radicand)
    return 1 + max(depth(s) for s in (ast.sup, ast.sub) if s is not None)


def latex_of_ast(ast: ExprAst) -> list[str]:
    if isinstance(ast, Symbol):
        return [ast.token]
    if isinstance(ast, Row):
        return [t for c in ast.children for t in latex_of_ast(c)]
    if isinstance(ast, Frac):
        return [FRAC, "{", *latex_of_ast(ast.numerator), "}", "{", *latex_of_ast(ast.denominator), "}"]
    if isinstance(ast, Sqrt):
        return [SQRT, "{", *latex_of_ast(ast.radicand), "}"]
    out = latex_of_ast(ast.base)
    if ast.sup is not None:
        out += ["^", "{", *latex_of_ast(ast.sup), "}"]
    if ast.sub is not None:
        out += ["_", "{", *latex_of_ast(ast.sub), "}"]
    return out


def ast_from_tokens(tokens: Sequence[str]) -> Row:
    """Parse a canonical token sequence back into an AST (the inverse of ``latex_of_ast``)."""
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take(expected=None):
        nonlocal pos
        tok = peek()
        if tok is None or (expected is not None and tok != expected):
            raise TokenizeError(f"expected {expected or 'a token'}, got {tok!r}", pos)
        pos += 1
        return tok

    def group():
        take("{")
        row = parse_row()
        take("}")
        return row

    def parse_row():
        items = []
        while peek() not in (None, "}"):
            tok = peek()
            if tok == FRAC:
                take()
                atom = Frac(group(), group())
            elif tok == SQRT:
                take()
                atom = Sqrt(group())
            elif tok == "{":
                items.extend(group().children)
                continue
            elif tok in ("^", "_"):
                raise TokenizeError(f"script {tok!r} without a base", pos)
            else:
                atom = Symbol(take())
            scripts = {}
            while peek() in ("^", "_"):
                mark = take()
                if mark in scripts:
                    raise TokenizeError(f"double {mark!r}", pos)
                scripts[mark] = group()
            if scripts:
                if not isinstance(atom, Symbol):
                    raise TokenizeError("scripts on a fraction or radical are not supported", pos)
                atom = Scripted(atom, scripts.get("^"), scripts.get("_"))
            items.append(atom)
        if not items:
            raise TokenizeError("empty group", pos)
        return Row(tuple(items))

    row = parse_row()
    if pos != len(tokens):
        raise TokenizeError("unbalanced '}'", pos)
    return row


# --- random trees -----------------------------------------------------------

def _leaf_tokens(vocab: Vocabulary) -> list[str]:
    leaves = [t for t in vocab.tokens if t not in STRUCTURAL_TOKENS]
    if not leaves:
        raise ValueError("vocabulary has no non-structural tokens")
    return leaves


def random_ast(seed: int, max_depth: int, vocab: Vocabulary = DEFAULT_VOCABULARY) -> Row:
    if max_depth < 1:
        raise ValueError("max_depth must be at least 1")
    rng = random.Random(seed)
    return _random_row(rng, max_depth, _leaf_tokens(vocab), 5)


def _random_row(rng: random.Random, max_depth: int, leaves: list[str], max_len: int) -> Row:
    return Row(tuple(_random_item(rng, max_depth, leaves) for _ in range(rng.randint(1, max_len))))


def _random_item(rng: random.Random, max_depth: int, leaves: list[str]) -> ExprAst:
    if max_depth <= 1 or rng.random() < 0.55:
        return Symbol(rng.choice(leaves))
    inner = max_depth - 1
    kind = rng.choice(("frac", "sqrt", "script"))
    if kind == "frac":
        return Frac(_random_row(rng, inner, leaves, 3), _random_row(rng, inner, leaves, 3))
    if kind == "sqrt":
        return Sqrt(_random_row(rng, inner, leaves, 3))
    which = rng.choice(("sup", "sub", "both"))
    sup = _random_row(rng, inner, leaves, 3) if which != "sub" else None
    sub = _random_row(rng, inner, leaves, 3) if which != "sup" else None
    return Scripted(Symbol(rng.choice(leaves)), sup, sub)


# --- layout -----------------------------------------------------------------

# proportions relative to the current glyph size
GLYPH_WIDTH = 0.8
BAR_THICKNESS = 0.1
FRAC_GAP = 0.2
FRAC_PAD = 0.1
SQRT_HOOK = 0.5
SQRT_PAD = 0.25
SCRIPT_SHIFT = 0.75
SCRIPT_CLEARANCE = 0.5
SCRIPT_GAP = 0.8  # share of the row gap between a base and its scripts
MIN_EXTENT = 0.1  # jittered extents never shrink below this share of their nominal size


@dataclass(frozen=True)
class LayoutParams:
    glyph_size: float = 40.0
    script_scale: float = 0.5
    gap: float = 10.0
    jitter: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.glyph_size <= 0 or self.gap < 0:
            raise LayoutError("glyph_size must be positive and gap non-negative")
        if not 0 < self.script_scale < 1:
            raise LayoutError("script_scale must lie in (0, 1)")
        if not 0 <= self.jitter < 0.5:
            raise LayoutError("jitter must lie in [0, 0.5)")


@dataclass
class _Placed:
    width: float
    ascent: float
    descent: float
    # (label, x, y, w, h, glyph size), y relative to the axis
    boxes: list = field(default_factory=list)

    def shifted(self, dx: float, dy: float) -> list:
        return [(lab, x + dx, y + dy, w, h, s) for lab, x, y, w, h, s in self.boxes]


class _Layout:
    def __init__(self, params: LayoutParams):
        self.p = params

    def place(self, ast: ExprAst, size: float) -> _Placed:
        if size < 1.0:
            raise LayoutError(f"glyph size {size:.3g} px is below one pixel; tree too deep for these params")
        if isinstance(ast, Symbol):
            return self._glyph(ast.token, size)
        if isinstance(ast, Row):
            return self._row(ast.children, size)
        if isinstance(ast, Frac):
            return self._frac(ast, size)
        if isinstance(ast, Sqrt):
            return self._sqrt(ast, size)
        return self._scripted(ast, size)

    def _gap(self, size: float) -> float:
        return self.p.gap * size / self.p.glyph_size

    def _glyph(self, token: str, size: float) -> _Placed:
        w = GLYPH_WIDTH * size
        h = BAR_THICKNESS * size if token == BAR else size
        return _Placed(w, h / 2, h / 2, [(token, 0.0, -h / 2, w, h, size)])

    def _row(self, children, size: float) -> _Placed:
        out = _Placed(0.0, 0.0, 0.0)
        x = 0.0
        for k, child in enumerate(children):
            if k:
                x += self._gap(size)
            placed = self.place(child, size)
            out.boxes += placed.shifted(x, 0.0)
            out.ascent = max(out.ascent, placed.ascent)
            out.descent = max(out.descent, placed.descent)
            x += placed.width
        out.width = x
        return out

    def _frac(self, ast: Frac, size: float) -> _Placed:
        num = self.place(ast.numerator, size)
        den = self.place(ast.denominator, size)
        t, v = BAR_THICKNESS * size, FRAC_GAP * size
        bar_w = max(num.width, den.width) + 2 * FRAC_PAD * size
        out = _Placed(bar_w, t / 2 + v + num.ascent + num.descent, t / 2 + v + den.ascent + den.descent)
        out.boxes.append((BAR, 0.0, -t / 2, bar_w, t, size))
        out.boxes += num.shifted((bar_w - num.width) / 2, -(t / 2 + v + num.descent))
        out.boxes += den.shifted((bar_w - den.width) / 2, t / 2 + v + den.ascent)
        return out

    def _sqrt(self, ast: Sqrt, size: float) -> _Placed:
        rad = self.place(ast.radicand, size)
        hook, pad = SQRT_HOOK * size, SQRT_PAD * size
        w = hook + rad.width + pad
        out = _Placed(w, rad.ascent + pad, rad.descent + pad)
        out.boxes.append((SQRT, 0.0, -out.ascent, w, out.ascent + out.descent, size))
        out.boxes += rad.shifted(hook, 0.0)
        return out

    def _scripted(self, ast: Scripted, size: float) -> _Placed:
        base = self.place(ast.base, size)
        small = size * self.p.script_scale
        x = base.width + SCRIPT_GAP * self._gap(size)
        out = _Placed(base.width, base.ascent, base.descent, list(base.boxes))
        if ast.sup is not None:
            sup = self.place(ast.sup, small)
            # raise tall scripts far enough that their lowest part clears the base's upper half
            shift = max(SCRIPT_SHIFT * size, sup.descent + SCRIPT_CLEARANCE * size)
            out.boxes += sup.shifted(x, -shift)
            out.width = max(out.width, x + sup.width)
            out.ascent = max(out.ascent, shift + sup.ascent)
        if ast.sub is not None:
            sub = self.place(ast.sub, small)
            shift = max(SCRIPT_SHIFT * size, sub.ascent + SCRIPT_CLEARANCE * size)
            out.boxes += sub.shifted(x, shift)
            out.width = max(out.width, x + sub.width)
            out.descent = max(out.descent, shift + sub.descent)
        return out


def layout(ast: ExprAst, params: LayoutParams | None = None) -> list[SymbolBox]:
    """Place one box per leaf symbol plus one per fraction bar and radical.

    With ``params.jitter > 0`` every coordinate of every box is perturbed by an
    independent uniform draw of at most ``jitter`` times that box's glyph size.
    """
    params = params or LayoutParams()
    validate_ast(ast)
    placed = _Layout(params).place(ast, params.glyph_size)
    rng = random.Random(params.seed)
    j = params.jitter
    margin = params.glyph_size / 2
    top = placed.ascent
    out = []
    for label, x, y, w, h, size in placed.boxes:
        if j:
            x += rng.uniform(-j, j) * size
            y += rng.uniform(-j, j) * size
            w = max(MIN_EXTENT * w, w + rng.uniform(-j, j) * size)
            h = max(MIN_EXTENT * h, h + rng.uniform(-j, j) * size)
        out.append(SymbolBox(label, x + margin, y + top + margin, w, h))
    return out
