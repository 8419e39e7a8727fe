"""Global Otsu binarization of 8-bit grayscale images, with binary PGM I/O."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .errors import InputError

INK, BACKGROUND = 0, 255


@dataclass(frozen=True)
class GrayImage:
    width: int
    height: int
    intensities: bytes  # row-major

    def __post_init__(self):
        try:
            data = bytes(self.intensities)
        except (TypeError, ValueError):
            raise InputError("intensities must be integers in [0, 255]") from None
        object.__setattr__(self, "intensities", data)
        if self.width < 0 or self.height < 0:
            raise InputError("negative image size")
        if len(data) != self.width * self.height:
            raise InputError(f"{len(data)} intensities for a {self.width}x{self.height} image")


def histogram(img: GrayImage) -> list[int]:
    counts = Counter(img.intensities)
    return [counts.get(v, 0) for v in range(256)]


def otsu_threshold_from_histogram(hist: Sequence[int]) -> int:
    """Threshold t maximizing between-class variance, class 0 being values <= t.

    Compared in exact integer arithmetic so ties resolve to the smallest t.
    For n0, n1 pixels with intensity sums s0, s1 the variance is proportional
    to (n1*s0 - n0*s1)**2 / (n0*n1).
    """
    total = sum(hist)
    if total == 0:
        raise InputError("empty image")
    total_sum = sum(v * c for v, c in enumerate(hist))
    best_t, best_num, best_den = None, 0, 1
    n0 = s0 = 0
    for t in range(256):
        n0 += hist[t]
        s0 += t * hist[t]
        n1 = total - n0
        if n0 == 0 or n1 == 0:
            continue
        num = (n1 * s0 - n0 * (total_sum - s0)) ** 2
        den = n0 * n1
        if best_t is None or num * best_den > best_num * den:
            best_t, best_num, best_den = t, num, den
    if best_t is None:
        # a single intensity: nothing to separate
        return next(v for v, c in enumerate(hist) if c)
    return best_t


def otsu_threshold(img: GrayImage) -> int:
    if not img.intensities:
        raise InputError("empty image")
    return otsu_threshold_from_histogram(histogram(img))


def binarize(img: GrayImage, t: int) -> GrayImage:
    """Pixels <= t become ink (0), the rest background (255)."""
    table = bytes(INK if v <= t else BACKGROUND for v in range(256))
    return GrayImage(img.width, img.height, img.intensities.translate(table))


def _read_token(data: bytes, pos: int) -> tuple[bytes, int]:
    while True:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        break
    start = pos
    while pos < len(data) and not data[pos : pos + 1].isspace() and data[pos : pos + 1] != b"#":
        pos += 1
    if start == pos:
        raise InputError("truncated PGM header")
    return data[start:pos], pos


def parse_pgm(data: bytes) -> GrayImage:
    magic, pos = _read_token(data, 0)
    if magic != b"P5":
        raise InputError(f"not a binary PGM (magic {magic!r})")
    fields = []
    for _ in range(3):
        tok, pos = _read_token(data, pos)
        if not tok.isdigit():
            raise InputError(f"bad PGM header field {tok!r}")
        fields.append(int(tok))
    width, height, maxval = fields
    if maxval != 255:
        raise InputError(f"only maxval 255 is supported, got {maxval}")
    if pos >= len(data) or not data[pos : pos + 1].isspace():
        raise InputError("truncated PGM header")
    pixels = data[pos + 1 :]
    if len(pixels) < width * height:
        raise InputError(f"truncated PGM: {len(pixels)} of {width * height} pixel bytes")
    return GrayImage(width, height, pixels[: width * height])


def read_pgm(path) -> GrayImage:
    return parse_pgm(Path(path).read_bytes())


def encode_pgm(img: GrayImage) -> bytes:
    return f"P5\n{img.width} {img.height}\n255\n".encode("ascii") + img.intensities


def write_pgm(img: GrayImage, path) -> None:
    Path(path).write_bytes(encode_pgm(img))
