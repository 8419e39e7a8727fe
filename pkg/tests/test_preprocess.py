from __future__ import annotations

import random
from fractions import Fraction

import pytest

from hmer.errors import InputError
from hmer.preprocess import (
    GrayImage,
    binarize,
    encode_pgm,
    histogram,
    otsu_threshold,
    otsu_threshold_from_histogram,
    parse_pgm,
    read_pgm,
    write_pgm,
)


def exhaustive_otsu(hist):
    """Between-class variance w0*w1*(m0-m1)^2 in exact rationals; smallest t wins ties."""
    total = sum(hist)
    best_t, best = None, Fraction(-1)
    for t in range(256):
        n0 = sum(hist[: t + 1])
        n1 = total - n0
        if n0 == 0 or n1 == 0:
            continue
        m0 = Fraction(sum(v * hist[v] for v in range(t + 1)), n0)
        m1 = Fraction(sum(v * hist[v] for v in range(t + 1, 256)), n1)
        var = Fraction(n0, total) * Fraction(n1, total) * (m0 - m1) ** 2
        if var > best:
            best_t, best = t, var
    if best_t is None:
        # one occupied intensity: the contract returns that intensity
        return next(v for v in range(256) if hist[v])
    return best_t


def _image(values, width=None):
    width = width or len(values)
    return GrayImage(width, len(values) // width, bytes(values))


def test_constant_image():
    assert otsu_threshold(_image([128] * 16)) == 128


def test_bimodal_60_40():
    img = _image([10] * 60 + [200] * 40, 10)
    t = otsu_threshold(img)
    assert 10 <= t < 200
    assert t == exhaustive_otsu(histogram(img))


def test_random_histograms_sample():
    rng = random.Random(2)
    for _ in range(20):
        hist = [rng.choice((0, 0, rng.randint(0, 50))) for _ in range(256)]
        hist[rng.randrange(256)] += 1
        assert otsu_threshold_from_histogram(hist) == exhaustive_otsu(hist)


def test_empty_image():
    with pytest.raises(InputError):
        otsu_threshold(GrayImage(0, 0, b""))


def test_bad_intensities():
    with pytest.raises(InputError):
        GrayImage(1, 1, [300])
    with pytest.raises(InputError):
        GrayImage(2, 2, b"\x00")


def test_binarize_rules():
    img = _image([0, 50, 100, 150, 200, 250])
    assert binarize(img, 255).intensities == bytes(6)
    assert binarize(_image([10, 20]), 5).intensities == b"\xff\xff"
    once = binarize(img, 120)
    assert once.intensities == bytes([0, 0, 0, 255, 255, 255])
    assert binarize(once, 120) == once


def test_pgm_round_trip(tmp_path):
    img = GrayImage(3, 2, bytes([0, 1, 2, 253, 254, 255]))
    assert encode_pgm(img) == b"P5\n3 2\n255\n" + bytes([0, 1, 2, 253, 254, 255])
    p = tmp_path / "a.pgm"
    write_pgm(img, p)
    assert read_pgm(p) == img


def test_pgm_header_comments():
    assert parse_pgm(b"P5 # made by hand\n2 1\n255\n\x07\x08") == GrayImage(2, 1, b"\x07\x08")


@pytest.mark.parametrize("data", [
    b"P5\n3 2\n255\n\x00\x01",  # truncated pixels
    b"P5\n3 2\n",  # truncated header
    b"P2\n1 1\n255\n0",
    b"P5\n1 1\n65535\n\x00\x00",
    b"P5\nx 1\n255\n\x00",
])
def test_pgm_rejects(data):
    with pytest.raises(InputError):
        parse_pgm(data)
