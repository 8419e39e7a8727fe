"""LaTeX token sequences: emission from trees and tokenization of strings.

The canonical form has one token per command or character, structural
braces as ``{``/``}``, and every script argument braced.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .bsrt import Bsrt, validate_tree
from .detections import BAR, DEFAULT_VOCABULARY
from .errors import ContractError, StructureError, TokenizeError
from .relations import RelationLabel

R = RelationLabel
TokenSequence = list

FRAC = "\\frac"

# commands understood by the tokenizer on top of the vocabulary's own
STRUCTURE_COMMANDS = frozenset({FRAC, "\\sqrt", "\\left", "\\right"})
ALIASES = {"\\dfrac": FRAC, "\\tfrac": FRAC, "\\lt": "<", "\\gt": ">", "\\leq": "\\le", "\\geq": "\\ge",
           "\\ne": "\\neq", "\\lbrace": "\\{", "\\rbrace": "\\}"}
SPACING_COMMANDS = frozenset({"\\,", "\\;", "\\:", "\\!", "\\ ", "\\quad", "\\qquad"})


def default_commands() -> frozenset[str]:
    return frozenset(t for t in DEFAULT_VOCABULARY.tokens if t.startswith("\\")) | STRUCTURE_COMMANDS


# --- emission ---------------------------------------------------------------

def emit_latex(tree: Bsrt) -> TokenSequence:
    try:
        validate_tree(tree)
    except StructureError as exc:
        raise ContractError(str(exc)) from None
    slots = {i: tree.children(i) for i in range(len(tree.nodes))}
    out: list[str] = []
    _emit_chain(tree, slots, tree.root, out)
    return out


def _emit_chain(tree: Bsrt, slots, node: int, out: list[str]) -> None:
    while node is not None:
        kids = slots[node]
        label = tree.nodes[node].label
        for rel, ids in kids.items():
            if len(ids) > 1:
                raise ContractError(f"node {node} has {len(ids)} {rel} children")
        above, below = kids.get(R.ABOVE), kids.get(R.BELOW)
        if above or below:
            if label != BAR or not (above and below):
                raise ContractError(f"node {node} ({label!r}) has an incomplete or misplaced fraction slot")
            out += [FRAC, "{"]
            _emit_chain(tree, slots, above[0], out)
            out += ["}", "{"]
            _emit_chain(tree, slots, below[0], out)
            out.append("}")
        else:
            out.append(label)
        if R.INSIDE in kids:
            out.append("{")
            _emit_chain(tree, slots, kids[R.INSIDE][0], out)
            out.append("}")
        for rel, mark in ((R.SUPERSCRIPT, "^"), (R.SUBSCRIPT, "_")):
            if rel in kids:
                out += [mark, "{"]
                _emit_chain(tree, slots, kids[rel][0], out)
                out.append("}")
        node = kids[R.RIGHT][0] if R.RIGHT in kids else None


def render_string(tokens: Sequence[str]) -> str:
    """Compact LaTeX text whose tokenization gives back ``tokens``."""
    parts: list[str] = []
    for tok in tokens:
        if parts and parts[-1][-1:].isalpha() and parts[-1].startswith("\\") and tok[:1].isalpha():
            parts.append(" ")
        parts.append(tok)
    return "".join(parts)


# --- tokenization -----------------------------------------------------------

def _raw_tokens(s: str, commands: frozenset[str]) -> list[tuple[str, int]]:
    by_length = sorted(commands | set(ALIASES) | SPACING_COMMANDS, key=len, reverse=True)
    out = []
    i = 0
    while i < len(s):
        ch = s[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "\\":
            match = next((c for c in by_length if s.startswith(c, i)), None)
            if match is None:
                j = i + 1
                while j < len(s) and s[j].isalpha():
                    j += 1
                name = s[i:max(j, i + 2)]
                raise TokenizeError(f"unknown command {name!r}", i)
            i += len(match)
            if match in SPACING_COMMANDS:
                continue
            out.append((ALIASES.get(match, match), i - len(match)))
            continue
        out.append((ch, i))
        i += 1
    return out


def _strip_delimiters(raw: list[tuple[str, int]]) -> list[tuple[str, int]]:
    out = []
    k = 0
    while k < len(raw):
        tok, pos = raw[k]
        if tok in ("\\left", "\\right"):
            if k + 1 >= len(raw):
                raise TokenizeError(f"{tok} without a delimiter", pos)
            delim = raw[k + 1][0]
            if delim != ".":
                out.append((delim, raw[k + 1][1]))
            k += 2
            continue
        out.append((tok, pos))
        k += 1
    return out


def tokenize_latex(s: str, commands: Iterable[str] | None = None) -> TokenSequence:
    """Split ``s`` into canonical tokens.

    Commands are matched longest-first against ``commands`` (default: the
    built-in vocabulary plus structural commands).
    """
    command_set = frozenset(commands) if commands is not None else default_commands()
    toks = _strip_delimiters(_raw_tokens(s, command_set | STRUCTURE_COMMANDS))

    opened: list[int] = []
    for tok, pos in toks:
        if tok == "{":
            opened.append(pos)
        elif tok == "}":
            if not opened:
                raise TokenizeError("unbalanced '}'", pos)
            opened.pop()
    if opened:
        raise TokenizeError("unbalanced '{'", opened[-1])

    out: list[str] = []
    k = 0
    while k < len(toks):
        tok, pos = toks[k]
        out.append(tok)
        k += 1
        if tok in ("^", "_"):
            if k >= len(toks) or toks[k][0] == "}":
                raise TokenizeError(f"missing argument after {tok!r}", pos)
            if toks[k][0] in ("^", "_"):
                raise TokenizeError(f"double script after {tok!r}", pos)
            if toks[k][0] != "{":
                out += ["{", toks[k][0], "}"]
                k += 1
    return out
