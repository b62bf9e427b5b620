import json
import math
import os
import re
import tempfile
from fractions import Fraction
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Iterator, Sequence, Tuple

import numpy as np


def colex_combinations(n: int, k: int) -> Iterator[Tuple[int, ...]]:
    """
    Yield the k-subsets of range(n) in colexicographic order.

    Subsets are compared on their largest element first, then the next
    largest, so every subset of range(m) precedes any subset containing m.

    Args:
        n: Size of the ground set
        k: Subset size

    Returns:
        Iterator of sorted tuples
    """
    if k == 0:
        yield ()
        return
    for top in range(k - 1, n):
        for rest in colex_combinations(top, k - 1):
            yield rest + (top,)


def parse_rational(text: str) -> Fraction:
    """
    Parse an exact rational from a decimal literal or a `p/q` token.

    Args:
        text: Raw coefficient text

    Returns:
        Exact Fraction
    """
    cleaned = text.strip()
    if not cleaned:
        raise ValueError("empty coefficient")
    return Fraction(cleaned)


def format_rational(value: Fraction) -> str:
    """Print a Fraction as an integer or `p/q`."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def clean_token(token: str) -> str:
    """
    Clean a CLI token (model names, sector keys) for lookups.

    Args:
        token: Raw token

    Returns:
        Lower-case token with stray characters removed
    """
    if not token:
        return ""
    cleaned = token.strip().lower()
    cleaned = re.sub(r"[^\w\s.,=+-]", "", cleaned)
    return cleaned


def _format_float(value: float) -> str:
    if math.isnan(value) or math.isinf(value):
        return "null"
    text = f"{value:.17g}"
    if re.fullmatch(r"-?\d+", text):
        text += ".0"
    return text


def _encode(value: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    close = " " * (indent * level)
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, (np.bool_,)):
        return json.dumps(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _format_float(float(value))
    if isinstance(value, Fraction):
        return json.dumps(format_rational(value))
    if isinstance(value, str):
        return json.dumps(value)
    if hasattr(value, "to_dict"):
        return _encode(value.to_dict(), indent, level)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = sorted((str(key), item) for key, item in value.items())
        body = ",\n".join(f"{pad}{json.dumps(key)}: {_encode(item, indent, level + 1)}" for key, item in items)
        return "{\n" + body + "\n" + close + "}"
    if isinstance(value, (list, tuple, np.ndarray)):
        if len(value) == 0:
            return "[]"
        body = ",\n".join(f"{pad}{_encode(item, indent, level + 1)}" for item in value)
        return "[\n" + body + "\n" + close + "]"
    return json.dumps(str(value))


def dump_json(obj: Any, indent: int = 2) -> str:
    """
    Serialize to JSON deterministically.

    Keys are sorted and floats are written with 17 significant digits, so
    equal inputs always give byte-identical documents.

    Args:
        obj: JSON-like structure (objects exposing to_dict() are expanded)
        indent: Spaces per nesting level

    Returns:
        JSON text ending with a newline
    """
    return _encode(obj, indent, 0) + "\n"


def atomic_write(path: str, data) -> None:
    """
    Write text or bytes to `path` without ever leaving a partial file.

    Args:
        path: Destination path
        data: str or bytes payload
    """
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    mode = "wb" if isinstance(data, (bytes, bytearray)) else "w"
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, mode) as handle:
            handle.write(data)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise


def map_chunks(func, items: Sequence, workers: int, *args) -> list:
    """
    Apply `func(chunk, offset, *args)` to contiguous chunks of `items`.

    Results come back in chunk order whatever the worker count, so callers
    can reduce them deterministically.

    Args:
        func: Picklable callable taking (chunk, offset, *args)
        items: Sequence to split
        workers: Process count; 1 runs in-process

    Returns:
        List of per-chunk results
    """
    if workers <= 1 or len(items) < 2 * workers:
        return [func(items, 0, *args)]
    size = -(-len(items) // workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(func, items[start:start + size], start, *args) for start in range(0, len(items), size)]
        return [future.result() for future in futures]
