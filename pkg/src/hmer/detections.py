"""Symbol detections: data types, loaders and light post-processing.

Boxes are stored in image pixels with the origin at the top-left corner and
y increasing downward, exactly as detectors report them.
"""

from __future__ import annotations

import json
import math
import string
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import DetectionParseError, ValidationError, VocabularyError

BAR = "-"
SQRT = "\\sqrt"
STRUCTURAL_TOKENS = frozenset({BAR, SQRT})

_SYMBOL_FIELDS = ("label", "x_min", "y_min", "width", "height", "score")
_REQUIRED_SYMBOL_FIELDS = frozenset(_SYMBOL_FIELDS) - {"score"}


@dataclass(frozen=True)
class SymbolBox:
    """One detected symbol: a LaTeX token and its axis-aligned box."""

    label: str
    x_min: float
    y_min: float
    width: float
    height: float
    score: float = 1.0

    def __post_init__(self):
        for name in ("x_min", "y_min", "width", "height", "score"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(value):
                raise ValidationError(f"{name} must be a finite number, got {value!r}")
        if self.width <= 0 or self.height <= 0:
            raise ValidationError(f"non-positive extent {self.width}x{self.height} for {self.label!r}")
        if not 0.0 <= self.score <= 1.0:
            raise ValidationError(f"score {self.score} outside [0, 1]")

    @property
    def x_max(self) -> float:
        return self.x_min + self.width

    @property
    def y_max(self) -> float:
        return self.y_min + self.height

    @property
    def area(self) -> float:
        return self.width * self.height

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Expression:
    image_id: str
    symbols: tuple[SymbolBox, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        if not self.image_id:
            raise ValidationError("expression has an empty image_id")
        if not self.symbols:
            raise ValidationError(f"expression {self.image_id!r} has no symbols")

    def to_dict(self) -> dict:
        return {"image_id": self.image_id, "symbols": [s.to_dict() for s in self.symbols]}


class Vocabulary:
    """Bijective map between detector class ids and LaTeX tokens."""

    def __init__(self, id_to_token: Mapping[int, str]):
        tokens = list(id_to_token.values())
        if len(set(tokens)) != len(tokens):
            dup = next(t for t in tokens if tokens.count(t) > 1)
            raise VocabularyError(f"duplicate token {dup!r}")
        self.id_to_token = dict(id_to_token)
        self.token_to_id = {t: i for i, t in self.id_to_token.items()}

    def __len__(self) -> int:
        return len(self.id_to_token)

    def __contains__(self, token: str) -> bool:
        return token in self.token_to_id

    def __eq__(self, other) -> bool:
        return isinstance(other, Vocabulary) and self.id_to_token == other.id_to_token

    def __repr__(self) -> str:
        return f"Vocabulary({len(self)} tokens)"

    def token(self, class_id: int) -> str:
        try:
            return self.id_to_token[class_id]
        except KeyError:
            raise VocabularyError(f"class id {class_id} not in vocabulary") from None

    @property
    def tokens(self) -> list[str]:
        return [self.id_to_token[i] for i in sorted(self.id_to_token)]

    def missing_structural(self) -> set[str]:
        return set(STRUCTURAL_TOKENS) - set(self.token_to_id)

    @classmethod
    def from_tokens(cls, tokens: Iterable[str]) -> "Vocabulary":
        return cls(dict(enumerate(tokens)))


_DEFAULT_TOKENS = (
    list(string.digits)
    + list(string.ascii_lowercase)
    + list(string.ascii_uppercase)
    + ["+", BAR, "=", "(", ")", "[", "]", "<", ">", ",", ".", "/", "|", "!", "'", ":"]
    + [
        SQRT, "\\times", "\\div", "\\pm", "\\cdot", "\\{", "\\}",
        "\\alpha", "\\beta", "\\gamma", "\\theta", "\\pi", "\\lambda", "\\mu", "\\sigma",
        "\\Delta", "\\infty", "\\le", "\\ge", "\\neq", "\\angle", "\\because",
        "\\therefore", "\\in", "\\sim", "\\cdots", "\\perp", "\\circ", "\\triangle",
    ]
)

DEFAULT_VOCABULARY = Vocabulary.from_tokens(_DEFAULT_TOKENS)


def load_vocabulary(path) -> Vocabulary:
    """Read ``id<TAB>token`` lines. Blank lines are skipped."""
    mapping: dict[int, str] = {}
    seen: dict[str, int] = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            raw_id, token = line.split("\t")
            class_id = int(raw_id)
        except ValueError:
            raise VocabularyError(f"{path}:{lineno}: expected 'id<TAB>token', got {line!r}") from None
        if class_id in mapping:
            raise VocabularyError(f"{path}:{lineno}: duplicate id {class_id}")
        if token in seen:
            raise VocabularyError(f"{path}:{lineno}: duplicate token {token!r}")
        mapping[class_id] = token
        seen[token] = class_id
    return Vocabulary(mapping)


def dump_vocabulary(vocab: Vocabulary, path) -> None:
    lines = [f"{i}\t{vocab.id_to_token[i]}\n" for i in sorted(vocab.id_to_token)]
    Path(path).write_text("".join(lines), encoding="utf-8")


def _symbol_from_dict(raw, image_id: str, index: int, vocab: Vocabulary | None) -> SymbolBox:
    if not isinstance(raw, dict):
        raise ValidationError(f"{image_id}: symbol {index} is not an object")
    unknown = set(raw) - set(_SYMBOL_FIELDS)
    if unknown:
        raise ValidationError(f"{image_id}: symbol {index} has unknown fields {sorted(unknown)}")
    missing = _REQUIRED_SYMBOL_FIELDS - set(raw)
    if missing:
        raise ValidationError(f"{image_id}: symbol {index} is missing {sorted(missing)}")
    label = raw["label"]
    if not isinstance(label, str):
        raise ValidationError(f"{image_id}: symbol {index} label is not a string")
    if vocab is not None and label not in vocab:
        raise VocabularyError(f"{image_id}: symbol {index} has unknown label {label!r}")
    try:
        return SymbolBox(**raw)
    except ValidationError as exc:
        raise ValidationError(f"{image_id}: symbol {index}: {exc}") from None


def expressions_from_obj(obj, vocab: Vocabulary | None = DEFAULT_VOCABULARY) -> list[Expression]:
    if not isinstance(obj, dict) or set(obj) != {"expressions"}:
        raise ValidationError("top level must be an object with exactly the key 'expressions'")
    if not isinstance(obj["expressions"], list):
        raise ValidationError("'expressions' must be a list")
    out = []
    for k, raw in enumerate(obj["expressions"]):
        if not isinstance(raw, dict):
            raise ValidationError(f"expression {k} is not an object")
        unknown = set(raw) - {"image_id", "symbols"}
        if unknown:
            raise ValidationError(f"expression {k} has unknown fields {sorted(unknown)}")
        image_id = raw.get("image_id")
        if not isinstance(image_id, str) or not image_id:
            raise ValidationError(f"expression {k} has a missing or empty image_id")
        symbols = raw.get("symbols")
        if not isinstance(symbols, list):
            raise ValidationError(f"{image_id}: 'symbols' must be a list")
        boxes = [_symbol_from_dict(s, image_id, i, vocab) for i, s in enumerate(symbols)]
        out.append(Expression(image_id, boxes))
    return out


def load_detections_json(path, vocab: Vocabulary | None = DEFAULT_VOCABULARY) -> list[Expression]:
    """Load the detection JSON file, validating every symbol.

    Pass ``vocab=None`` to skip the label check.
    """
    data = Path(path).read_bytes()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise DetectionParseError(f"{path}: invalid UTF-8", exc.start) from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        offset = len(text[: exc.pos].encode("utf-8"))
        raise DetectionParseError(f"{path}: {exc.msg}", offset) from None
    return expressions_from_obj(obj, vocab)


def dumps_detections(expressions: Sequence[Expression]) -> str:
    obj = {"expressions": [e.to_dict() for e in expressions]}
    return json.dumps(obj, ensure_ascii=False, indent=1) + "\n"


def dump_detections_json(expressions: Sequence[Expression], path) -> None:
    Path(path).write_text(dumps_detections(expressions), encoding="utf-8")


def denormalize(cx: float, cy: float, w: float, h: float, image_w: float, image_h: float) -> tuple[float, float, float, float]:
    """YOLO-normalized center box -> pixel (x_min, y_min, width, height)."""
    return (cx - w / 2) * image_w, (cy - h / 2) * image_h, w * image_w, h * image_h


def normalize(box: SymbolBox, image_w: float, image_h: float) -> tuple[float, float, float, float]:
    cx = (box.x_min + box.width / 2) / image_w
    cy = (box.y_min + box.height / 2) / image_h
    return cx, cy, box.width / image_w, box.height / image_h


def load_detections_yolo(directory, vocab: Vocabulary, image_sizes: Mapping[str, tuple[float, float]]) -> list[Expression]:
    """Read one ``<image_id>.txt`` per image in the darknet/ultralytics label format.

    Files are visited in sorted name order; ids without a size entry are skipped.
    """
    out = []
    for path in sorted(Path(directory).glob("*.txt")):
        image_id = path.stem
        if image_id not in image_sizes:
            continue
        image_w, image_h = image_sizes[image_id]
        boxes = []
        for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
            parts = line.split()
            if not parts:
                continue
            where = f"{path.name}:{lineno}"
            if len(parts) not in (5, 6):
                raise ValidationError(f"{where}: expected 5 or 6 fields, got {len(parts)}")
            try:
                class_id = int(parts[0])
                values = [float(p) for p in parts[1:]]
            except ValueError:
                raise ValidationError(f"{where}: non-numeric field in {line!r}") from None
            if any(not 0.0 <= v <= 1.0 for v in values):
                raise ValidationError(f"{where}: coordinate outside [0, 1] in {line!r}")
            label = vocab.token(class_id)
            score = values[4] if len(values) == 5 else 1.0
            x_min, y_min, width, height = denormalize(*values[:4], image_w, image_h)
            try:
                boxes.append(SymbolBox(label, x_min, y_min, width, height, score))
            except ValidationError as exc:
                raise ValidationError(f"{image_id}: symbol {len(boxes)}: {exc}") from None
        out.append(Expression(image_id, boxes))
    return out


def iou(a: SymbolBox, b: SymbolBox) -> float:
    ix = max(0.0, min(a.x_max, b.x_max) - max(a.x_min, b.x_min))
    iy = max(0.0, min(a.y_max, b.y_max) - max(a.y_min, b.y_min))
    inter = ix * iy
    return inter / (a.area + b.area - inter)


def deduplicate(symbols: Sequence[SymbolBox], threshold: float = 0.9) -> list[SymbolBox]:
    """Drop same-label boxes overlapping a higher-scored one with IoU above ``threshold``.

    Input order is preserved for the survivors.
    """
    ranked = sorted(range(len(symbols)), key=lambda i: (-symbols[i].score, i))
    kept: list[int] = []
    for i in ranked:
        s = symbols[i]
        if all(symbols[k].label != s.label or iou(symbols[k], s) <= threshold for k in kept):
            kept.append(i)
    return [symbols[i] for i in sorted(kept)]
