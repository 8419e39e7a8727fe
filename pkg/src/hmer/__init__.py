"""Rule-based structural analysis of detected handwritten math symbols.

Symbol boxes go in; a relationship tree and a LaTeX token sequence come out.
"""

from __future__ import annotations

from .bsrt import Bsrt, Edge, build_tree, reading_order
from .detections import DEFAULT_VOCABULARY, Expression, SymbolBox, Vocabulary, load_detections_json
from .emitter import emit_latex, render_string, tokenize_latex
from .errors import (
    ContractError,
    DegeneratePairError,
    DetectionParseError,
    HmerError,
    InputError,
    LayoutError,
    StructureError,
    TokenizeError,
    ValidationError,
    VocabularyError,
)
from .geometry import PairFeatures, pair_features
from .metrics import EvalReport, edit_distance, evaluate
from .preprocess import GrayImage, binarize, otsu_threshold
from .relations import RelationLabel, RuleConfig, classify, containment, default_config
from .synth import LayoutParams, latex_of_ast, layout, random_ast

__version__ = "0.1.0"

__all__ = [
    "Bsrt", "Edge", "build_tree", "reading_order",
    "DEFAULT_VOCABULARY", "Expression", "SymbolBox", "Vocabulary", "load_detections_json",
    "emit_latex", "render_string", "tokenize_latex",
    "ContractError", "DegeneratePairError", "DetectionParseError", "HmerError", "InputError",
    "LayoutError", "StructureError", "TokenizeError", "ValidationError", "VocabularyError",
    "PairFeatures", "pair_features",
    "EvalReport", "edit_distance", "evaluate",
    "GrayImage", "binarize", "otsu_threshold",
    "RelationLabel", "RuleConfig", "classify", "containment", "default_config",
    "LayoutParams", "latex_of_ast", "layout", "random_ast",
]
