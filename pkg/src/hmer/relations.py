"""Spatial relation classification from pair features and a threshold table.

Rule files are JSON. Angles are written as multiples of pi and every range
uses interval notation, e.g. ``"(0.4, 0.6)"`` or ``"[0.1, 0.4]"``.
"""

from __future__ import annotations

import enum
import json
import math
import re
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Mapping

from .detections import SQRT, SymbolBox
from .errors import DegeneratePairError, InputError
from .geometry import PairFeatures, interval_overlap, pair_features


class RelationLabel(str, enum.Enum):
    ABOVE = "Above"
    BELOW = "Below"
    RIGHT = "Right"
    SUPERSCRIPT = "Superscript"
    SUBSCRIPT = "Subscript"
    INSIDE = "Inside"
    UNRELATED = "Unrelated"

    def __str__(self) -> str:
        return self.value


_INTERVAL_RE = re.compile(r"^\s*([\[(])\s*([-+0-9.eE]+)\s*,\s*([-+0-9.eE]+)\s*([\])])\s*$")


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    lo_open: bool = False
    hi_open: bool = False

    def __post_init__(self):
        if not self.lo < self.hi:
            raise InputError(f"empty interval {self}")

    def __contains__(self, x: float) -> bool:
        above = x > self.lo if self.lo_open else x >= self.lo
        below = x < self.hi if self.hi_open else x <= self.hi
        return above and below

    def __str__(self) -> str:
        return f"{'(' if self.lo_open else '['}{self.lo:g}, {self.hi:g}{')' if self.hi_open else ']'}"

    def scaled(self, k: float) -> "Interval":
        return replace(self, lo=self.lo * k, hi=self.hi * k)

    @classmethod
    def parse(cls, text: str) -> "Interval":
        m = _INTERVAL_RE.match(text)
        if not m:
            raise InputError(f"bad interval {text!r}")
        return cls(float(m.group(2)), float(m.group(3)), m.group(1) == "(", m.group(4) == ")")


def _open(lo, hi):
    return Interval(lo, hi, True, True)


@dataclass(frozen=True)
class RelationRule:
    """Conjunction of feature predicates. ``theta`` is in radians; None means unconstrained."""

    theta: Interval | None = None
    lam: Interval | None = None
    mu: Interval | None = None
    alpha: Interval | None = None
    beta: Interval | None = None

    def matches(self, f: PairFeatures) -> bool:
        checks = ((self.theta, f.theta), (self.lam, f.lam), (self.mu, f.mu),
                  (self.alpha, f.alpha), (self.beta, f.beta))
        return all(iv is None or x in iv for iv, x in checks)


ORDERED_RULES = (
    RelationLabel.ABOVE,
    RelationLabel.BELOW,
    RelationLabel.SUPERSCRIPT,
    RelationLabel.SUBSCRIPT,
    RelationLabel.RIGHT,
)


@dataclass(frozen=True)
class RuleConfig:
    rules: Mapping[RelationLabel, RelationRule]
    inside_threshold: float = 0.85
    script_return_band: float = 0.25
    container_labels: frozenset = frozenset({SQRT})
    priority: tuple = (RelationLabel.INSIDE,) + ORDERED_RULES

    def __post_init__(self):
        object.__setattr__(self, "container_labels", frozenset(self.container_labels))
        object.__setattr__(self, "priority", tuple(RelationLabel(p) for p in self.priority))
        if not 0 < self.inside_threshold <= 1:
            raise InputError("inside_threshold must lie in (0, 1]")
        if self.script_return_band < 0:
            raise InputError("script_return_band must be non-negative")
        if RelationLabel.UNRELATED in self.priority or len(set(self.priority)) != len(self.priority):
            raise InputError("priority must list distinct relations other than Unrelated")
        for label, rule in self.rules.items():
            for name in ("lam", "mu"):
                iv = getattr(rule, name)
                if iv is not None and not (0 <= iv.lo and iv.hi <= 1):
                    raise InputError(f"{label} {name} thresholds must lie in [0, 1]")


def default_config() -> RuleConfig:
    pi = math.pi
    rules = {
        RelationLabel.ABOVE: RelationRule(theta=_open(0.4 * pi, 0.6 * pi), mu=Interval(0.5, 1.0, lo_open=True)),
        RelationLabel.BELOW: RelationRule(theta=_open(-0.6 * pi, -0.4 * pi), mu=Interval(0.5, 1.0, lo_open=True)),
        RelationLabel.SUPERSCRIPT: RelationRule(theta=Interval(0.1 * pi, 0.4 * pi), mu=Interval(0.0, 0.5)),
        RelationLabel.SUBSCRIPT: RelationRule(theta=Interval(-0.4 * pi, -0.1 * pi), mu=Interval(0.0, 0.5)),
        RelationLabel.RIGHT: RelationRule(theta=_open(-0.1 * pi, 0.1 * pi), lam=Interval(0.3, 1.0, lo_open=True)),
    }
    return RuleConfig(rules=rules)


def containment(outer: SymbolBox, inner: SymbolBox) -> float:
    """Fraction of ``inner``'s area covered by ``outer``."""
    ix = interval_overlap(outer.x_min, outer.x_max, inner.x_min, inner.x_max)
    iy = interval_overlap(outer.y_min, outer.y_max, inner.y_min, inner.y_max)
    return min(1.0, ix * iy / inner.area)


def classify(ref: SymbolBox, adj: SymbolBox, config: RuleConfig | None = None) -> RelationLabel:
    """First relation in priority order whose predicates all hold, else Unrelated."""
    if config is None:
        config = default_config()
    try:
        features = pair_features(ref, adj)
    except DegeneratePairError:
        return RelationLabel.UNRELATED
    for label in config.priority:
        if label is RelationLabel.INSIDE:
            if ref.label in config.container_labels and containment(ref, adj) >= config.inside_threshold:
                return label
            continue
        rule = config.rules.get(label)
        if rule is not None and rule.matches(features):
            return label
    return RelationLabel.UNRELATED


# --- JSON round trip -------------------------------------------------------

def config_to_dict(config: RuleConfig) -> dict:
    rules = {}
    for label in ORDERED_RULES:
        rule = config.rules.get(label)
        if rule is None:
            continue
        entry = {}
        for name in ("theta", "lam", "mu", "alpha", "beta"):
            iv = getattr(rule, name)
            if iv is None:
                continue
            if name == "theta":
                iv = iv.scaled(1 / math.pi)
                iv = replace(iv, lo=round(iv.lo, 12), hi=round(iv.hi, 12))
            entry["lambda" if name == "lam" else name] = str(iv)
        rules[label.value] = entry
    return {
        "units": "pi_radians",
        "rules": rules,
        "inside_threshold": config.inside_threshold,
        "script_return_band": config.script_return_band,
        "container_labels": sorted(config.container_labels),
        "priority": [p.value for p in config.priority],
    }


def config_from_dict(obj: dict) -> RuleConfig:
    if obj.get("units") != "pi_radians":
        raise InputError('rule file must declare "units": "pi_radians"')
    known = {"units", "rules", "inside_threshold", "script_return_band", "container_labels", "priority"}
    unknown = set(obj) - known
    if unknown:
        raise InputError(f"unknown rule-file fields {sorted(unknown)}")
    base = default_config()
    rules = {}
    try:
        for name, entry in obj.get("rules", {}).items():
            label = RelationLabel(name)
            kwargs = {}
            for key, text in entry.items():
                attr = "lam" if key == "lambda" else key
                if attr not in ("theta", "lam", "mu", "alpha", "beta"):
                    raise InputError(f"unknown predicate {key!r} for {name}")
                iv = Interval.parse(text)
                kwargs[attr] = iv.scaled(math.pi) if attr == "theta" else iv
            rules[label] = RelationRule(**kwargs)
    except ValueError as exc:
        raise InputError(f"bad rule file: {exc}") from None
    return RuleConfig(
        rules=rules if "rules" in obj else base.rules,
        inside_threshold=obj.get("inside_threshold", base.inside_threshold),
        script_return_band=obj.get("script_return_band", base.script_return_band),
        container_labels=frozenset(obj.get("container_labels", base.container_labels)),
        priority=tuple(obj.get("priority", [p.value for p in base.priority])),
    )


def load_config(path) -> RuleConfig:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: {exc}") from None
    return config_from_dict(obj)


def save_config(config: RuleConfig, path) -> None:
    Path(path).write_text(json.dumps(config_to_dict(config), indent=2) + "\n", encoding="utf-8")
