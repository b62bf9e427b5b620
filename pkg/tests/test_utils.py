import math
import os
from fractions import Fraction

import numpy as np
import pytest

from utils import atomic_write, clean_token, colex_combinations, dump_json, format_rational, map_chunks, parse_rational


def _chunk_sums(chunk, offset, scale):
    return [(offset + index, value * scale) for index, value in enumerate(chunk)]


def test_colex_order():
    assert list(colex_combinations(4, 2)) == [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)]
    assert list(colex_combinations(3, 0)) == [()]
    assert len(list(colex_combinations(10, 4))) == math.comb(10, 4)


@pytest.mark.parametrize("text,value", [
    ("3", Fraction(3)),
    (" -1/2 ", Fraction(-1, 2)),
    ("0.7", Fraction(7, 10)),
    ("1e-2", Fraction(1, 100)),
])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["", "  ", "abc", "1/"])
def test_parse_rational_errors(text):
    with pytest.raises(ValueError):
        parse_rational(text)


def test_format_rational():
    assert format_rational(Fraction(4, 2)) == "2"
    assert format_rational(Fraction(-7, 10)) == "-7/10"


def test_clean_token():
    assert clean_token("  G1! ") == "g1"
    assert clean_token("k=0, p=1") == "k=0, p=1"
    assert clean_token(None) == ""


def test_dump_json_is_canonical():
    assert dump_json({"b": 1.0, "a": Fraction(1, 3)}) == '{\n  "a": "1/3",\n  "b": 1.0\n}\n'
    assert dump_json({"x": float("nan"), "y": [], "z": {}}) == '{\n  "x": null,\n  "y": [],\n  "z": {}\n}\n'
    assert dump_json([np.int64(2), np.float64(0.1), np.bool_(True)]) == "[\n  2,\n  0.10000000000000001,\n  true\n]\n"


def test_atomic_write(tmp_path):
    path = tmp_path / "deep" / "file.json"
    atomic_write(str(path), "first")
    atomic_write(str(path), "second")
    assert path.read_text() == "second"
    atomic_write(str(tmp_path / "blob.bin"), b"\x00\x01")
    assert (tmp_path / "blob.bin").read_bytes() == b"\x00\x01"
    assert not [name for name in os.listdir(tmp_path / "deep") if name.startswith(".tmp-")]


@pytest.mark.parametrize("workers", [1, 2, 3])
def test_map_chunks_keeps_order(workers):
    items = list(range(10))
    chunks = map_chunks(_chunk_sums, items, workers, 2)
    flat = [pair for chunk in chunks for pair in chunk]
    assert flat == [(index, 2 * index) for index in range(10)]
