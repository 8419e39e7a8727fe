"""Geometric features of an ordered pair of symbol boxes.

``ref`` is the earlier symbol of the pair (its reading-order predecessor or
candidate parent) and ``adj`` the adjacent one. "Length" means horizontal
extent and "width" vertical extent throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .detections import SymbolBox
from .errors import DegeneratePairError


@dataclass(frozen=True)
class PairFeatures:
    theta: float
    alpha: float
    beta: float
    lam: float
    mu: float


def center(box: SymbolBox) -> tuple[float, float]:
    return box.x_min + box.width / 2, box.y_min + box.height / 2


def wrap_angle(theta: float) -> float:
    """Map any angle into (-pi, pi]."""
    wrapped = math.remainder(theta, 2 * math.pi)
    return math.pi if wrapped <= -math.pi else wrapped


def center_offset_theta(ref: SymbolBox, adj: SymbolBox) -> float:
    """Direction from ref's center to adj's center, counter-clockwise, up positive.

    Image y grows downward, so it is negated before ``atan2``.
    """
    rx, ry = center(ref)
    ax, ay = center(adj)
    dx, dy = ax - rx, ry - ay
    if dx == 0 and dy == 0:
        raise DegeneratePairError(f"coincident centers for {ref.label!r} and {adj.label!r}")
    theta = math.atan2(dy, dx)
    return math.pi if theta == -math.pi else theta


def aspect_ratios(ref: SymbolBox, adj: SymbolBox) -> tuple[float, float]:
    return ref.width / adj.width, ref.height / adj.height


def interval_overlap(lo_a: float, hi_a: float, lo_b: float, hi_b: float) -> float:
    return max(0.0, min(hi_a, hi_b) - max(lo_a, lo_b))


def overlap_ratios(ref: SymbolBox, adj: SymbolBox) -> tuple[float, float]:
    """(lambda, mu): shared y-projection over ref's height, shared x-projection over ref's width."""
    y_shared = interval_overlap(ref.y_min, ref.y_max, adj.y_min, adj.y_max)
    x_shared = interval_overlap(ref.x_min, ref.x_max, adj.x_min, adj.x_max)
    # float rounding in x_max can push the ratio a hair past 1
    return min(1.0, y_shared / ref.height), min(1.0, x_shared / ref.width)


def pair_features(ref: SymbolBox, adj: SymbolBox) -> PairFeatures:
    theta = center_offset_theta(ref, adj)
    alpha, beta = aspect_ratios(ref, adj)
    lam, mu = overlap_ratios(ref, adj)
    return PairFeatures(theta=theta, alpha=alpha, beta=beta, lam=lam, mu=mu)
